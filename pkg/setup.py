"""Build script: compiles the optional accelerator extension when Cython and
a C toolchain are available, otherwise installs the pure-Python package.

    pip install -e . --no-build-isolation

The package works without the extension; the gauge kernels then fall back to
the pure-Python implementations in ``latticelab._kernels.pykernels``.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("latticelab._kernels.cykernels",
                   ["src/latticelab/_kernels/cykernels.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"latticelab: skipping compiled kernels ({exc!r}); "
          "pure-Python fallback will be used")

setup(ext_modules=ext_modules)
