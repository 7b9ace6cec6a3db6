"""Backend equivalence: the compiled kernels must reproduce the pure ones."""

import math

import numpy as np
import pytest

from latticelab._kernels import cykernels, pykernels

R2 = 1.0 / math.sqrt(2.0)

needs_compiled = pytest.mark.skipif(cykernels is None,
                                    reason="compiled kernels not built")


def hull_data():
    corners = [(a * R2, b * R2, c * R2)
               for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    disks = np.array([[0, 1, 1, 1], [0, 2, 1, 1], [1, 2, 1, 1]], dtype=float)
    return disks, np.asarray(corners)


def test_pure_prepare_rejects_degenerate():
    with pytest.raises(ValueError):
        pykernels.prepare_hull(np.zeros((0, 4)), np.array([[1.0, 0.0, 0.0]]))


def test_pure_facet_gauge():
    F = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
    assert pykernels.facet_gauge(F, [0.3, -0.8]) == pytest.approx(0.8)
    X = np.random.default_rng(0).standard_normal((50, 2))
    nb = pykernels.facet_gauge_batch(F, X)
    assert np.allclose(nb, np.abs(X).max(axis=1))


def test_pure_hull_structured_points():
    disks, pts = hull_data()
    prep = pykernels.prepare_hull(disks, pts)
    assert pykernels.hull_gauge(prep, [0, 0, 1.0]) == pytest.approx(1.0, abs=1e-9)
    assert pykernels.hull_gauge(prep, [R2, R2, -R2]) == pytest.approx(1.0, abs=1e-9)
    assert pykernels.hull_gauge(prep, [0.3, 0.4, 0.0]) == pytest.approx(0.5, abs=1e-9)
    assert pykernels.hull_support(prep, [1.0, 1.0, 1.0]) == pytest.approx(3 * R2)


def test_pure_hull_distance_bounds():
    disks, pts = hull_data()
    prep = pykernels.prepare_hull(disks, pts)
    d, lb, cdir, state = pykernels.hull_distance(prep, [2.0, 0.0, 0.0])
    assert d == pytest.approx(1.0, abs=1e-6)
    assert lb <= d + 1e-12 and lb > 0.9
    inside = pykernels.hull_distance(prep, [0.1, 0.1, 0.1])
    assert inside[0] <= 1e-10


@needs_compiled
def test_backend_agreement_on_random_points():
    disks, pts = hull_data()
    pp = pykernels.prepare_hull(disks, pts)
    pc = cykernels.prepare_hull(disks, pts)
    X = np.random.default_rng(42).standard_normal((300, 3))
    gp = pykernels.hull_gauge_batch(pp, X)
    gc = cykernels.hull_gauge_batch(pc, X)
    assert np.max(np.abs(gp - gc) / gp) < 1e-8


@needs_compiled
def test_backend_agreement_support():
    disks, pts = hull_data()
    pp = pykernels.prepare_hull(disks, pts)
    pc = cykernels.prepare_hull(disks, pts)
    rng = np.random.default_rng(1)
    for f in rng.standard_normal((40, 3)):
        assert cykernels.hull_support(pc, f) == pytest.approx(
            pykernels.hull_support(pp, f), rel=1e-12)
        sp = cykernels.hull_support_point(pc, f)
        assert float(np.dot(sp, f)) == pytest.approx(pykernels.hull_support(pp, f), rel=1e-12)


@needs_compiled
def test_backend_agreement_facet():
    F = np.random.default_rng(3).standard_normal((9, 4))
    F = np.vstack([F, -F])
    x = np.random.default_rng(4).standard_normal(4)
    assert cykernels.facet_gauge(F, x) == pytest.approx(pykernels.facet_gauge(F, x), rel=1e-15)
    X = np.random.default_rng(5).standard_normal((30, 4))
    assert np.allclose(cykernels.facet_gauge_batch(F, X), pykernels.facet_gauge_batch(F, X))


@needs_compiled
def test_backend_agreement_ellipse_pieces():
    disks = np.array([[0, 1, 0.5, 2.0], [1, 2, 1.5, 0.25]], dtype=float)
    pts = np.asarray([[0.3, 0.3, 0.3], [-0.3, -0.3, -0.3],
                      [1.0, 0.0, -0.2], [-1.0, 0.0, 0.2]])
    pp = pykernels.prepare_hull(disks, pts)
    pc = cykernels.prepare_hull(disks, pts)
    X = np.random.default_rng(7).standard_normal((100, 3))
    gp = pykernels.hull_gauge_batch(pp, X)
    gc = cykernels.hull_gauge_batch(pc, X)
    assert np.max(np.abs(gp - gc) / gp) < 1e-8


def test_gauge_determinism():
    disks, pts = hull_data()
    prep = pykernels.prepare_hull(disks, pts)
    x = [0.2, -0.7, 0.4]
    assert pykernels.hull_gauge(prep, x) == pykernels.hull_gauge(prep, x)
