"""Gauge kernel backend selection.

The compiled Cython kernels are preferred when present; the pure-Python
implementations are the fallback.  Set ``LATTICELAB_KERNELS=py`` or ``=cy``
to force a backend (``cy`` raises if the extension is missing).
"""

import importlib
import os

from . import pykernels

_choice = os.environ.get("LATTICELAB_KERNELS", "auto")
if _choice not in {"auto", "py", "cy"}:
    raise RuntimeError(f"LATTICELAB_KERNELS must be auto, py or cy (got {_choice!r})")

cykernels = None
if _choice in {"auto", "cy"}:
    try:
        cykernels = importlib.import_module(".cykernels", __name__)
    except ImportError:
        if _choice == "cy":
            raise

_impl = cykernels if cykernels is not None else pykernels

BACKEND = _impl.BACKEND
facet_gauge = _impl.facet_gauge
facet_gauge_batch = _impl.facet_gauge_batch
prepare_hull = _impl.prepare_hull
hull_support = _impl.hull_support
hull_support_point = _impl.hull_support_point
hull_distance = _impl.hull_distance
hull_gauge = _impl.hull_gauge
hull_gauge_batch = _impl.hull_gauge_batch
