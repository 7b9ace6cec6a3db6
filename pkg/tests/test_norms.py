"""Norm combinators: evaluation, duality, attaining structure."""

import math

import numpy as np
import pytest
from fractions import Fraction

from latticelab.norms import (Disk, DirectSum, DualOf, FacetNorm,
                              HullOfPieces, Lp, NormSpecError, PointSet,
                              PolytopeBall, absolute_check, attaining_point,
                              dual_norm, enumerate_attaining_pairs,
                              is_absolute, is_polyhedral, norm, norm_batch,
                              supporting_functional)
from latticelab.riesz import as_vector, neg_part, pos_part

R2 = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="module")
def factor2d():
    f = Fraction(2, 3)
    return FacetNorm(functionals=((1, 0), (0, 1), (f, f)), sign_flips=True)


@pytest.fixture(scope="module")
def hnap3d(factor2d):
    return DirectSum(parts=((factor2d, (0, 1)), (Lp(1, 1), (2,))), outer=Lp(1, 2))


@pytest.fixture(scope="module")
def sm3d():
    corners = tuple((a * R2, b * R2, c * R2)
                    for a in (1, -1) for b in (1, -1) for c in (1, -1))
    return HullOfPieces(pieces=(Disk(axes=(0, 1)), Disk(axes=(0, 2)),
                                Disk(axes=(1, 2)), PointSet(points=corners)), n=3)


# -- evaluation -------------------------------------------------------------


def test_lp_norms():
    assert norm(Lp(1, 2), np.array([3.0, 4.0])) == 7.0
    assert norm(Lp(2, 2), np.array([3.0, 4.0])) == pytest.approx(5.0)
    assert norm(Lp("inf", 2), np.array([3.0, -4.0])) == 4.0


def test_hnap3d_unit_vectors(hnap3d):
    x = as_vector(["3/4", "-3/4", "0"])
    assert norm(hnap3d, x) == 1
    f = as_vector(["2/3", "-2/3", "1"])
    assert dual_norm(hnap3d, f) == 1
    assert f @ x == 1


def test_hnap3d_float_mode(hnap3d):
    assert norm(hnap3d, np.array([0.75, -0.75, 0.0])) == pytest.approx(1.0, abs=1e-12)
    for eps1 in (1, -1):
        for eps2 in (1, -1):
            assert norm(hnap3d, np.array([eps1 / 2, eps2, 0.0])) == pytest.approx(1.0)


def test_sm3d_units(sm3d):
    assert norm(sm3d, np.array([R2, R2, 0.0])) == pytest.approx(1.0, abs=1e-9)
    assert norm(sm3d, np.array([R2, R2, -R2])) == pytest.approx(1.0, abs=1e-9)
    assert norm(sm3d, np.array([0, 0, 1.0])) == pytest.approx(1.0, abs=1e-9)


def test_sm3d_dual_formula(sm3d):
    rng = np.random.default_rng(5)
    for f in rng.standard_normal((50, 3)):
        expect = max(math.hypot(f[0], f[1]), math.hypot(f[0], f[2]),
                     math.hypot(f[1], f[2]), np.abs(f).sum() / math.sqrt(2.0))
        assert dual_norm(sm3d, f) == pytest.approx(expect, abs=1e-12)


def test_l2_self_dual():
    spec = Lp(2, 4)
    rng = np.random.default_rng(0)
    for f in rng.standard_normal((20, 4)):
        assert dual_norm(spec, f) == pytest.approx(norm(spec, f))


def test_zero_iff_zero(hnap3d, sm3d):
    for spec in (Lp(1, 3), hnap3d, sm3d):
        assert norm(spec, np.zeros(3)) == 0.0
        assert norm(spec, np.array([1e-3, 0, 0])) > 0


def test_dimension_mismatch(hnap3d):
    with pytest.raises(NormSpecError):
        norm(hnap3d, np.array([1.0, 2.0]))


def test_norm_batch_agrees(hnap3d, sm3d):
    rng = np.random.default_rng(2)
    X = rng.standard_normal((40, 3))
    for spec in (Lp(1, 3), Lp("inf", 3), hnap3d, sm3d):
        nb = norm_batch(spec, X)
        for x, v in zip(X, nb):
            assert v == pytest.approx(float(norm(spec, x)), rel=1e-9)


# -- duality sandwich and lattice invariants --------------------------------


@pytest.mark.parametrize("make", [
    lambda: Lp(1, 3), lambda: Lp(2, 3), lambda: Lp("inf", 3), lambda: Lp(3, 3),
])
def test_duality_sandwich(make):
    spec = make()
    rng = np.random.default_rng(7)
    X = rng.standard_normal((25, spec.dim))
    F = rng.standard_normal((25, spec.dim))
    for x in X:
        for f in F:
            assert f @ x <= float(dual_norm(spec, f)) * float(norm(spec, x)) + 1e-9


def test_dual_absolute_and_monotone(hnap3d):
    rng = np.random.default_rng(9)
    for f in rng.standard_normal((30, 3)):
        assert dual_norm(hnap3d, f) == pytest.approx(
            float(dual_norm(hnap3d, np.abs(f))), rel=1e-9)
    for _ in range(30):
        f = np.abs(rng.standard_normal(3))
        g = f * rng.uniform(0, 1, 3)
        assert dual_norm(hnap3d, g) <= dual_norm(hnap3d, f) + 1e-12


def test_pos_part_lipschitz(hnap3d, sm3d):
    rng = np.random.default_rng(13)
    for spec in (Lp(1, 3), Lp("inf", 3), hnap3d, sm3d):
        X = rng.standard_normal((60, 3))
        Y = rng.standard_normal((60, 3))
        lhs = norm_batch(spec, pos_part(X.T).T - pos_part(Y.T).T)
        rhs = norm_batch(spec, X - Y)
        assert np.all(lhs <= rhs + 1e-9)


# -- absoluteness -----------------------------------------------------------


def test_absolute_check_passes(hnap3d, sm3d):
    for spec in (Lp(1, 2), Lp(2.5, 4), hnap3d, sm3d):
        rep = absolute_check(spec)
        assert rep.ok
        assert is_absolute(spec)


def test_absolute_check_catches_skew_facet():
    spec = FacetNorm(functionals=((1, 0.5),), sign_flips=False)
    rep = absolute_check(spec)
    assert not rep.ok and not rep.absolute_ok
    x = rep.witness
    assert norm(spec, x) != pytest.approx(float(norm(spec, np.abs(x))), rel=1e-6)
    # the canonical witness from the derivation
    assert norm(spec, np.array([1.0, -1.0])) == pytest.approx(0.5)
    assert norm(spec, np.array([1.0, 1.0])) == pytest.approx(1.5)


def test_absolute_check_catches_unnormalized():
    spec = PolytopeBall(vertices=((2, 0), (0, 1)), sign_flips=True)
    rep = absolute_check(spec)
    assert rep.absolute_ok and not rep.normalized_ok


# -- supporting functionals and attaining points ----------------------------


def test_supporting_l1_sign():
    f = supporting_functional(Lp(1, 2), np.array([3.0, -4.0]))
    assert np.array_equal(f, np.array([1.0, -1.0]))


def test_supporting_l2_axis():
    f = supporting_functional(Lp(2, 3), np.array([1.0, 0, 0]))
    assert np.allclose(f, [1, 0, 0])


def test_supporting_contract_generic(hnap3d, sm3d):
    rng = np.random.default_rng(21)
    for spec in (Lp(1, 3), Lp(2, 3), Lp("inf", 3), hnap3d, sm3d):
        for x in rng.standard_normal((10, 3)):
            f = supporting_functional(spec, x)
            assert float(dual_norm(spec, f)) == pytest.approx(1.0, abs=2e-9)
            assert float(np.dot(np.asarray(f, float), x)) == pytest.approx(
                float(norm(spec, x)), abs=2e-9)


def test_supporting_hnap3d_witness(hnap3d):
    x = np.array([0.75, -0.75, 0.0])
    f = supporting_functional(hnap3d, x)
    assert float(np.dot(np.asarray(f, float), x)) == pytest.approx(1.0, abs=1e-12)
    assert float(dual_norm(hnap3d, f)) == pytest.approx(1.0, abs=1e-12)


def test_attaining_linf_corner():
    x = attaining_point(Lp("inf", 2), np.array([1.0, 1.0]))
    assert np.array_equal(x, np.array([1.0, 1.0]))


def test_attaining_polytope_vertex():
    spec = PolytopeBall(vertices=((1, 0), (0, 1)), sign_flips=False)
    x = attaining_point(spec, np.array([2.0, 1.0]))
    assert np.array_equal(np.asarray(x, float), np.array([1.0, 0.0]))


def test_attaining_sm3d_diagonal(sm3d):
    f = np.array([R2, R2, 0.0])
    x = attaining_point(sm3d, f)
    assert float(np.dot(x, f)) == pytest.approx(float(dual_norm(sm3d, f)), abs=1e-9)
    assert float(norm(sm3d, x)) == pytest.approx(1.0, abs=1e-9)


def test_attaining_contract_generic(hnap3d, sm3d):
    rng = np.random.default_rng(31)
    for spec in (Lp(1, 3), Lp(2, 3), hnap3d, sm3d, DualOf(Lp(1, 3))):
        for f in rng.standard_normal((8, 3)):
            x = attaining_point(spec, f)
            assert float(norm(spec, x)) == pytest.approx(1.0, abs=2e-9)
            assert float(np.dot(np.asarray(x, float), f)) == pytest.approx(
                float(dual_norm(spec, f)), abs=2e-9)


def test_zero_vector_rejected(hnap3d):
    with pytest.raises(NormSpecError):
        supporting_functional(hnap3d, np.zeros(3))
    with pytest.raises(NormSpecError):
        attaining_point(hnap3d, np.zeros(3))


# -- enumeration ------------------------------------------------------------


def test_enumerate_cross_polytope_pairs():
    pairs = enumerate_attaining_pairs(Lp(1, 2))
    vf = [p for p in pairs if p.kind == "vertex-facet"]
    assert len(vf) == 8
    assert all(p.residual <= 1e-12 for p in pairs)


def test_enumerate_square_pairs_by_duality():
    pairs = enumerate_attaining_pairs(Lp("inf", 2))
    vf = [p for p in pairs if p.kind == "vertex-facet"]
    assert len(vf) == 8


def test_enumerate_hnap3d_contains_flat_witness(hnap3d):
    pairs = enumerate_attaining_pairs(hnap3d)
    target_x = np.array([0.75, -0.75, 0.0])
    target_f = np.array([2 / 3, -2 / 3, 1.0])
    hit = any(np.allclose(np.asarray(p.x, float), target_x, atol=1e-9)
              and np.allclose(np.asarray(p.f, float), target_f, atol=1e-9)
              for p in pairs)
    assert hit


def test_enumerate_exact_residuals(hnap3d):
    pairs = enumerate_attaining_pairs(hnap3d, exact=True)
    for p in pairs[:200]:
        fx = sum(a * b for a, b in zip(p.x, p.f))
        assert fx == 1


def test_enumerate_rejects_non_polyhedral(sm3d):
    with pytest.raises(NormSpecError):
        enumerate_attaining_pairs(sm3d)


def test_is_polyhedral(hnap3d, sm3d):
    assert is_polyhedral(Lp(1, 4)) and is_polyhedral(Lp("inf", 3))
    assert not is_polyhedral(Lp(2, 3))
    assert is_polyhedral(hnap3d)
    assert not is_polyhedral(sm3d)


def test_direct_sum_validation(factor2d):
    with pytest.raises(NormSpecError):
        DirectSum(parts=((factor2d, (0, 1)), (Lp(1, 1), (1,))), outer=Lp(1, 2))
    with pytest.raises(NormSpecError):
        DirectSum(parts=((factor2d, (0, 1)),), outer=Lp(1, 2))


# -- exact-mode contracts ------------------------------------------------------


def test_exact_supporting_and_attaining_are_exact(hnap3d):
    from fractions import Fraction
    x = as_vector(["3/4", "-1/2", "1/8"])
    f = supporting_functional(hnap3d, x)
    assert f @ x == norm(hnap3d, x)
    assert dual_norm(hnap3d, f) == 1
    g = as_vector(["1/3", "-2/3", "1"])
    y = attaining_point(hnap3d, g)
    assert norm(hnap3d, y) == 1
    assert g @ y == dual_norm(hnap3d, g)


def test_exact_polytope_gauge_rationals():
    from fractions import Fraction
    spec = PolytopeBall(vertices=(("1", "0"), ("0", "1"), ("9/10", "1/2")),
                        sign_flips=True)
    x = as_vector(["9/10", "3/10"])
    v = norm(spec, x)
    assert isinstance(v, Fraction)
    assert v == Fraction(24, 25)


def test_duality_sandwich_composite(hnap3d, sm3d):
    rng = np.random.default_rng(23)
    for spec in (hnap3d, sm3d):
        X = rng.standard_normal((15, 3))
        F = rng.standard_normal((15, 3))
        for x in X:
            nx = float(norm(spec, x))
            for f in F:
                assert f @ x <= float(dual_norm(spec, f)) * nx + 1e-8


def test_ellipse_piece_boundary():
    spec = HullOfPieces(pieces=(Disk(axes=(0, 1), radii=(0.5, 2.0)),
                                Disk(axes=(0, 2)),
                                Disk(axes=(1, 2))), n=3)
    assert norm(spec, np.array([0.5, 0.0, 0.0])) == pytest.approx(1.0, abs=1e-9)
    assert norm(spec, np.array([0.0, 2.0, 0.0])) == pytest.approx(1.0, abs=1e-9)
    assert dual_norm(spec, np.array([2.0, 0.0, 0.0])) == pytest.approx(2.0, abs=1e-9)


def test_zero_generators_rejected():
    with pytest.raises(NormSpecError):
        FacetNorm(functionals=((0, 0),))
    with pytest.raises(NormSpecError):
        PolytopeBall(vertices=((1, 0), (0, 0)))
