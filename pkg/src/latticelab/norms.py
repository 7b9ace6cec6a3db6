"""Norm combinator system.

A :class:`NormSpec` describes a norm on R^n as a combinator tree:

* :class:`Lp` atoms,
* :class:`FacetNorm`, the maximum of a finite symmetric family of
  functionals (an H-description of the unit ball),
* :class:`PolytopeBall`, the gauge of the convex hull of a finite symmetric
  point set (a V-description),
* :class:`HullOfPieces`, the gauge of the convex hull of a union of simple
  convex pieces (coordinate-plane disks and finite point sets),
* :class:`DirectSum`, blockwise combination under an outer norm, and
* :class:`DualOf`, the dual norm of another spec.

Evaluation is dtype-driven: float64 vectors use the numeric kernels, object
vectors of :class:`fractions.Fraction` use the exact polyhedral paths.  The
same spec value can be evaluated in both modes.

Specs are immutable and hashable; derived data (symmetrized generators,
vertex/facet enumerations, kernel buffers) is cached per spec under
single-writer initialization and is read-only afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .polyhedra import (EnumerationError, Polyhedron, barycentric_grid,
                        symmetrize)
from .riesz import as_vector, is_exact, modulus

FLOAT_TOL = 1e-9
POLY_DIM_GUARD = 4

INF = float("inf")


class NormSpecError(ValueError):
    """Invalid spec construction or evaluation request."""


class DimensionGuardError(NormSpecError):
    """Requested an enumeration beyond the supported dimension."""


class ExactModeUnavailableError(NormSpecError):
    """The requested operation has no exact rational path for this spec."""


class NotAbsoluteError(NormSpecError):
    """A lattice-property operation was invoked on a non-absolute spec."""


def _tup(rows):
    return tuple(tuple(r) for r in rows)


def _coerce_scalar(v, exact: bool):
    if exact:
        return v if isinstance(v, Fraction) else Fraction(str(v) if isinstance(v, str) else v)
    return float(v)


def _rows_to_vectors(rows, exact: bool):
    return [as_vector(r, exact=exact) for r in rows]


# ---------------------------------------------------------------------------
# spec classes


class NormSpec:
    """Base class; concrete specs are frozen dataclasses."""

    @property
    def dim(self) -> int:  # pragma: no cover - overridden
        raise NotImplementedError

    # The operations are free functions below; methods delegate for
    # convenience.
    def norm(self, x):
        return norm(self, x)

    def dual_norm(self, f):
        return dual_norm(self, f)

    def supporting_functional(self, x):
        return supporting_functional(self, x)

    def attaining_point(self, f):
        return attaining_point(self, f)


@dataclass(frozen=True)
class Lp(NormSpec):
    p: object
    n: int

    def __post_init__(self):
        p = self.p
        if isinstance(p, str):
            object.__setattr__(self, "p", INF if p in ("inf", "oo") else float(p))
            p = self.p
        if not (p == INF or 1 <= float(p)):
            raise NormSpecError(f"Lp exponent must be in [1, inf], got {p}")
        if self.n < 1:
            raise NormSpecError("dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def conjugate(self) -> float:
        p = self.p
        if p == INF:
            return 1.0
        if float(p) == 1.0:
            return INF
        return float(p) / (float(p) - 1.0)


@dataclass(frozen=True)
class FacetNorm(NormSpec):
    """||x|| = max over the symmetrized functional set of <f, x>."""

    functionals: tuple
    sign_flips: bool = False

    def __post_init__(self):
        object.__setattr__(self, "functionals", _tup(self.functionals))
        if not self.functionals:
            raise NormSpecError("FacetNorm needs at least one functional")
        for f in self.functionals:
            if all(_is_zero(c) for c in f):
                raise NormSpecError("FacetNorm functionals must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.functionals[0])


@dataclass(frozen=True)
class PolytopeBall(NormSpec):
    """Gauge of conv of the symmetrized vertex set."""

    vertices: tuple
    sign_flips: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", _tup(self.vertices))
        if not self.vertices:
            raise NormSpecError("PolytopeBall needs at least one vertex")
        for v in self.vertices:
            if all(_is_zero(c) for c in v):
                raise NormSpecError("PolytopeBall generators must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class Disk:
    """Ellipse {x_i^2/r_i^2 + x_j^2/r_j^2 <= 1} in the coordinate plane
    (i, j), all other coordinates zero."""

    axes: tuple
    radii: tuple = (1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.axes) != 2 or self.axes[0] == self.axes[1]:
            raise NormSpecError("Disk needs two distinct coordinate axes")
        if min(self.radii) <= 0:
            raise NormSpecError("Disk radii must be positive")


@dataclass(frozen=True)
class PointSet:
    """Finite point set; contributes conv(+/- points) to the hull."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", _tup(self.points))
        if not self.points:
            raise NormSpecError("PointSet needs at least one point")


@dataclass(frozen=True)
class HullOfPieces(NormSpec):
    """Gauge of conv of the union of the pieces (symmetrized)."""

    pieces: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise NormSpecError("HullOfPieces needs at least one piece")
        for pc in self.pieces:
            if isinstance(pc, Disk):
                if max(pc.axes) >= self.n:
                    raise NormSpecError("Disk axis out of range")
            elif isinstance(pc, PointSet):
                if len(pc.points[0]) != self.n:
                    raise NormSpecError("PointSet dimension mismatch")
            else:
                raise NormSpecError(f"unsupported piece {pc!r}")

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class DirectSum(NormSpec):
    """Blockwise norms combined by an outer norm on the block values."""

    parts: tuple
    outer: NormSpec

    def __post_init__(self):
        parts = tuple((spec, tuple(int(c) for c in coords)) for spec, coords in self.parts)
        object.__setattr__(self, "parts", parts)
        seen = set()
        for spec, coords in parts:
            if len(coords) != spec.dim:
                raise NormSpecError("block coordinate count must match block dim")
            if seen & set(coords):
                raise NormSpecError("blocks must not overlap")
            seen |= set(coords)
        if seen != set(range(len(seen))):
            raise NormSpecError("blocks must partition 0..dim-1")
        if self.outer.dim != len(parts):
            raise NormSpecError("outer norm dimension must equal the number of blocks")

    @property
    def dim(self) -> int:
        return sum(len(c) for _, c in self.parts)


@dataclass(frozen=True)
class DualOf(NormSpec):
    inner: NormSpec

    @property
    def dim(self) -> int:
        return self.inner.dim


def _is_zero(c) -> bool:
    return c == 0


# ---------------------------------------------------------------------------
# cached derived data


@lru_cache(maxsize=None)
def _generators(spec, exact: bool):
    """Symmetrized generator matrix for FacetNorm / PolytopeBall."""
    rows = spec.functionals if isinstance(spec, FacetNorm) else spec.vertices
    vecs = _rows_to_vectors(rows, exact)
    pts = symmetrize(vecs, sign_flips=spec.sign_flips, exact=exact)
    M = np.empty((len(pts), spec.dim), dtype=object) if exact else \
        np.asarray([np.asarray(p, float) for p in pts], dtype=float)
    if exact:
        for i, p in enumerate(pts):
            for j, c in enumerate(p):
                M[i, j] = Fraction(c)
    return M


def is_polyhedral(spec: NormSpec) -> bool:
    if isinstance(spec, (FacetNorm, PolytopeBall)):
        return True
    if isinstance(spec, Lp):
        return spec.p == INF or float(spec.p) == 1.0 or spec.n == 1
    if isinstance(spec, DirectSum):
        if not all(is_polyhedral(s) for s, _ in spec.parts):
            return False
        out = spec.outer
        return isinstance(out, Lp) and (out.p == INF or float(out.p) == 1.0 or out.n == 1)
    if isinstance(spec, DualOf):
        return is_polyhedral(spec.inner)
    return False


def _embed(vec, coords, dim, exact: bool):
    out = np.zeros(dim, dtype=object if exact else float)
    if exact:
        out[:] = Fraction(0)
    for c, v in zip(coords, vec):
        out[c] = v
    return out


@lru_cache(maxsize=None)
def polyhedron_of(spec: NormSpec, exact: bool = False) -> Polyhedron:
    """Vertex + facet description of the unit ball of a polyhedral spec.

    Guarded to dim <= 4; exact over Fractions when ``exact``.
    """
    if not is_polyhedral(spec):
        raise NormSpecError(f"spec is not polyhedral: {spec!r}")
    if spec.dim > POLY_DIM_GUARD:
        raise DimensionGuardError(
            f"polyhedral enumeration supports dim <= {POLY_DIM_GUARD}, got {spec.dim}")
    one = Fraction(1) if exact else 1.0
    if isinstance(spec, Lp):
        basis = []
        for i in range(spec.n):
            e = np.zeros(spec.n, dtype=object if exact else float)
            if exact:
                e[:] = Fraction(0)
            e[i] = one
            basis.append(e)
        sym = symmetrize(basis, sign_flips=False, exact=exact)
        if float(spec.p) == 1.0 or spec.n == 1:
            return Polyhedron.from_vertices(sym, exact=exact)
        if spec.p == INF:
            return Polyhedron.from_normals(sym, exact=exact)
        raise NormSpecError(f"Lp({spec.p}) is not polyhedral for n > 1")
    if isinstance(spec, FacetNorm):
        return Polyhedron.from_normals(list(_generators(spec, exact)), exact=exact)
    if isinstance(spec, PolytopeBall):
        return Polyhedron.from_vertices(list(_generators(spec, exact)), exact=exact)
    if isinstance(spec, DualOf):
        return polyhedron_of(spec.inner, exact).dual()
    if isinstance(spec, DirectSum):
        out = spec.outer
        dim = spec.dim
        if float(out.p) == 1.0 or out.n == 1:
            verts = []
            for part, coords in spec.parts:
                sub = polyhedron_of(part, exact)
                verts += [_embed(v, coords, dim, exact) for v in sub.vertices]
            return Polyhedron.from_vertices(verts, exact=exact)
        if out.p == INF:
            normals = []
            for part, coords in spec.parts:
                sub = polyhedron_of(part, exact)
                normals += [_embed(a, coords, dim, exact) for a in sub.normals]
            return Polyhedron.from_normals(normals, exact=exact)
    raise NormSpecError(f"no polyhedral composition for {spec!r}")


@lru_cache(maxsize=None)
def _hull_prepared(spec: HullOfPieces):
    disks = []
    pts = []
    for pc in spec.pieces:
        if isinstance(pc, Disk):
            disks.append((pc.axes[0], pc.axes[1], pc.radii[0], pc.radii[1]))
        else:
            pts += symmetrize(_rows_to_vectors(pc.points, False), sign_flips=False)
    if not pts:
        pts = [np.zeros(spec.dim)]
    return _kernels.prepare_hull(
        np.asarray(disks, dtype=float).reshape(-1, 4), np.asarray(pts, dtype=float))


@lru_cache(maxsize=None)
def _pointset_prepared(spec):
    """Hull-kernel form of a PolytopeBall used above the enumeration guard."""
    pts = _generators(spec, False)
    return _kernels.prepare_hull(np.zeros((0, 4)), np.asarray(pts, dtype=float))


# ---------------------------------------------------------------------------
# norm evaluation


def _check_dim(spec, x):
    if len(x) != spec.dim:
        raise NormSpecError(f"vector of dim {len(x)} fed to spec of dim {spec.dim}")


def norm(spec: NormSpec, x) -> float | Fraction:
    """Evaluate ||x||; exact iff x is an object (Fraction) vector and the
    spec has an exact path."""
    x = as_vector(x)
    _check_dim(spec, x)
    exact = is_exact(x)
    if isinstance(spec, Lp):
        return _lp_norm(spec.p, x, exact)
    if isinstance(spec, FacetNorm):
        G = _generators(spec, exact)
        if exact:
            return max(G @ x)
        return _kernels.facet_gauge(G, x)
    if isinstance(spec, PolytopeBall):
        if spec.dim <= POLY_DIM_GUARD:
            return polyhedron_of(spec, exact).gauge(x)
        if exact:
            raise ExactModeUnavailableError("exact gauge beyond the dim guard")
        return _kernels.hull_gauge(_pointset_prepared(spec), x)
    if isinstance(spec, HullOfPieces):
        if exact:
            raise ExactModeUnavailableError("HullOfPieces has no exact path")
        return _kernels.hull_gauge(_hull_prepared(spec), x)
    if isinstance(spec, DirectSum):
        vals = [norm(part, x[list(coords)]) for part, coords in spec.parts]
        return norm(spec.outer, as_vector(vals, exact=exact))
    if isinstance(spec, DualOf):
        return dual_norm(spec.inner, x)
    raise NormSpecError(f"unknown spec {spec!r}")


def _lp_norm(p, x, exact: bool):
    a = modulus(x)
    if exact:
        if p == INF:
            return max(a)
        if float(p) == 1.0:
            return sum(a, start=Fraction(0))
        if len(x) == 1:
            return a[0]
        raise ExactModeUnavailableError(f"no exact path for Lp({p})")
    af = np.asarray(a, dtype=float)
    if p == INF:
        return float(af.max())
    p = float(p)
    if p == 1.0:
        return float(af.sum())
    if p == 2.0:
        return float(np.sqrt(np.dot(af, af)))
    m = af.max()
    if m == 0.0:
        return 0.0
    return float(m * (np.sum((af / m) ** p)) ** (1.0 / p))


def dual_norm(spec: NormSpec, f) -> float | Fraction:
    """Evaluate the dual norm ||f||* = max{<f, x> : ||x|| <= 1}."""
    f = as_vector(f)
    _check_dim(spec, f)
    exact = is_exact(f)
    if isinstance(spec, Lp):
        return _lp_norm(spec.conjugate, f, exact)
    if isinstance(spec, FacetNorm):
        if spec.dim <= POLY_DIM_GUARD:
            return polyhedron_of(spec, exact).support(f)
        if exact:
            raise ExactModeUnavailableError("exact dual beyond the dim guard")
        gens = PolytopeBall(vertices=tuple(map(tuple, spec.functionals)),
                            sign_flips=spec.sign_flips)
        return _kernels.hull_gauge(_pointset_prepared(gens), f)
    if isinstance(spec, PolytopeBall):
        G = _generators(spec, exact)
        if exact:
            return max(G @ f)
        return _kernels.facet_gauge(G, f)
    if isinstance(spec, HullOfPieces):
        if exact:
            raise ExactModeUnavailableError("HullOfPieces has no exact path")
        return _kernels.hull_support(_hull_prepared(spec), f)
    if isinstance(spec, DirectSum):
        vals = [dual_norm(part, f[list(coords)]) for part, coords in spec.parts]
        return dual_norm(spec.outer, as_vector(vals, exact=exact))
    if isinstance(spec, DualOf):
        return norm(spec.inner, f)
    raise NormSpecError(f"unknown spec {spec!r}")


def norm_batch(spec: NormSpec, X: np.ndarray) -> np.ndarray:
    """Vectorized float norm over the rows of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.dim:
        raise NormSpecError("norm_batch expects an (m, dim) array")
    if isinstance(spec, Lp):
        p = spec.p
        if p == INF:
            return np.abs(X).max(axis=1)
        if float(p) == 1.0:
            return np.abs(X).sum(axis=1)
        if float(p) == 2.0:
            return np.sqrt((X * X).sum(axis=1))
        return (np.abs(X) ** float(p)).sum(axis=1) ** (1.0 / float(p))
    if isinstance(spec, FacetNorm):
        return _kernels.facet_gauge_batch(_generators(spec, False), X)
    if isinstance(spec, PolytopeBall):
        if spec.dim <= POLY_DIM_GUARD:
            return polyhedron_of(spec, False).gauge_batch(X)
        return _kernels.hull_gauge_batch(_pointset_prepared(spec), X)
    if isinstance(spec, HullOfPieces):
        return _kernels.hull_gauge_batch(_hull_prepared(spec), X)
    if isinstance(spec, DirectSum):
        vals = np.column_stack([norm_batch(part, X[:, list(coords)])
                                for part, coords in spec.parts])
        return norm_batch(spec.outer, vals)
    if isinstance(spec, DualOf):
        return dual_norm_batch(spec.inner, X)
    raise NormSpecError(f"unknown spec {spec!r}")


def dual_norm_batch(spec: NormSpec, F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if isinstance(spec, Lp):
        return norm_batch(Lp(spec.conjugate, spec.n), F)
    if isinstance(spec, PolytopeBall):
        return _kernels.facet_gauge_batch(_generators(spec, False), F)
    if isinstance(spec, FacetNorm):
        if spec.dim <= POLY_DIM_GUARD:
            poly = polyhedron_of(spec, False)
            return np.max(F @ np.asarray(poly.vertices, float).T, axis=1)
        gens = PolytopeBall(vertices=tuple(map(tuple, spec.functionals)),
                            sign_flips=spec.sign_flips)
        return _kernels.hull_gauge_batch(_pointset_prepared(gens), F)
    if isinstance(spec, HullOfPieces):
        return np.array([_kernels.hull_support(_hull_prepared(spec), f) for f in F])
    if isinstance(spec, DirectSum):
        vals = np.column_stack([dual_norm_batch(part, F[:, list(coords)])
                                for part, coords in spec.parts])
        return dual_norm_batch(spec.outer, vals)
    if isinstance(spec, DualOf):
        return norm_batch(spec.inner, F)
    raise NormSpecError(f"unknown spec {spec!r}")


# ---------------------------------------------------------------------------
# supporting functionals and attaining points


def _sign(v, exact: bool):
    one = Fraction(1) if exact else 1.0
    if v > 0:
        return one
    if v < 0:
        return -one
    return one * 0


def supporting_functional(spec: NormSpec, x):
    """A functional f with ||f||* = 1 and f(x) = ||x||.

    Ties break toward the lowest generator index on polyhedral specs, so
    the output is deterministic.
    """
    x = as_vector(x)
    _check_dim(spec, x)
    exact = is_exact(x)
    if all(c == 0 for c in x):
        raise NormSpecError("supporting functional of the zero vector")
    if isinstance(spec, Lp):
        return _lp_supporting(spec.p, x, exact)
    if isinstance(spec, FacetNorm):
        G = _generators(spec, exact)
        vals = G @ x
        if exact:
            best = max(vals)
            k = next(i for i, v in enumerate(vals) if v == best)
        else:
            k = int(np.argmax(np.asarray(vals, float)))
        return np.array(G[k])
    if isinstance(spec, DualOf):
        return attaining_point(spec.inner, x)
    if isinstance(spec, DirectSum):
        return _direct_sum_supporting(spec, x, exact)
    if isinstance(spec, PolytopeBall):
        if spec.dim <= POLY_DIM_GUARD:
            poly = polyhedron_of(spec, exact)
            k = poly.gauge_argmax(x)
            return np.array(poly.normals[k])
        if exact:
            raise ExactModeUnavailableError("exact supporting beyond the dim guard")
        return attaining_point_sampled(DualOf(spec), x)
    if isinstance(spec, HullOfPieces):
        if exact:
            raise ExactModeUnavailableError("HullOfPieces has no exact path")
        return _hull_supporting(spec, x)
    raise NormSpecError(f"no supporting-functional path for {spec!r}")


def _lp_supporting(p, x, exact: bool):
    if p == INF:
        a = modulus(x)
        if exact:
            best = max(a)
            k = next(i for i, v in enumerate(a) if v == best)
        else:
            k = int(np.argmax(np.asarray(a, float)))
        f = np.zeros(len(x), dtype=object if exact else float)
        if exact:
            f[:] = Fraction(0)
        f[k] = _sign(x[k], exact)
        return f
    if float(p) == 1.0:
        return np.array([_sign(c, exact) for c in x],
                        dtype=object if exact else float)
    if exact:
        raise ExactModeUnavailableError(f"no exact supporting functional for Lp({p})")
    p = float(p)
    xf = np.asarray(x, dtype=float)
    nx = _lp_norm(p, xf, False)
    return np.sign(xf) * (np.abs(xf) / nx) ** (p - 1.0)


def _direct_sum_supporting(spec: DirectSum, x, exact: bool):
    blocks = [x[list(coords)] for _, coords in spec.parts]
    s = as_vector([norm(part, b) for (part, _), b in zip(spec.parts, blocks)],
                  exact=exact)
    g = modulus(supporting_functional(spec.outer, s))
    f = np.zeros(spec.dim, dtype=object if exact else float)
    if exact:
        f[:] = Fraction(0)
    for (part, coords), b, gk in zip(spec.parts, blocks, g):
        if all(c == 0 for c in b):
            continue
        fk = supporting_functional(part, b)
        for c, v in zip(coords, fk):
            f[c] = gk * v
    return f


def _hull_supporting(spec: HullOfPieces, x):
    """Numeric subgradient for hull gauges: maximize <f, x> over the dual
    ball (piece supports <= 1) starting from the separation certificate."""
    from scipy.optimize import minimize

    prepared = _hull_prepared(spec)
    xf = np.asarray(x, dtype=float)
    gx = _kernels.hull_gauge(prepared, xf)
    q = xf / (gx * (1.0 + 1e-7))
    ub, lb, cdir, _ = _kernels.hull_distance(prepared, q * (1.0 + 3e-7))
    if cdir is not None:
        f0 = np.asarray(cdir, dtype=float)
    else:
        f0 = xf.copy()
    h0 = _kernels.hull_support(prepared, f0)
    f0 = f0 / h0 if h0 > 0 else f0

    cons = []
    for pc in spec.pieces:
        if isinstance(pc, Disk):
            i, j = pc.axes
            ra, rb = pc.radii
            cons.append({"type": "ineq",
                         "fun": (lambda f, i=i, j=j, ra=ra, rb=rb:
                                 1.0 - math.hypot(ra * f[i], rb * f[j]))})
        else:
            P = np.asarray(symmetrize(_rows_to_vectors(pc.points, False),
                                      sign_flips=False), dtype=float)
            cons.append({"type": "ineq",
                         "fun": (lambda f, P=P: 1.0 - float(np.max(P @ f)))})
    res = minimize(lambda f: -float(np.dot(f, xf)), f0, constraints=cons,
                   method="SLSQP",
                   options={"maxiter": 300, "ftol": 1e-14})
    f = res.x if res.success or np.dot(res.x, xf) >= np.dot(f0, xf) else f0
    dn = dual_norm(spec, f)
    if dn > 0:
        f = f / dn
    return f


def attaining_point(spec: NormSpec, f):
    """A point x with ||x|| = 1 and f(x) = ||f||*."""
    f = as_vector(f)
    _check_dim(spec, f)
    exact = is_exact(f)
    if all(c == 0 for c in f):
        raise NormSpecError("attaining point of the zero functional")
    if isinstance(spec, Lp):
        return _lp_supporting(spec.conjugate, f, exact)
    if isinstance(spec, PolytopeBall):
        G = _generators(spec, exact)
        vals = G @ f
        if exact:
            best = max(vals)
            k = next(i for i, v in enumerate(vals) if v == best)
        else:
            k = int(np.argmax(np.asarray(vals, float)))
        return np.array(G[k])
    if isinstance(spec, FacetNorm):
        if spec.dim <= POLY_DIM_GUARD:
            poly = polyhedron_of(spec, exact)
            k = poly.support_argmax(f)
            return np.array(poly.vertices[k])
        if exact:
            raise ExactModeUnavailableError("exact attaining point beyond the dim guard")
        return attaining_point_sampled(spec, f)
    if isinstance(spec, HullOfPieces):
        if exact:
            raise ExactModeUnavailableError("HullOfPieces has no exact path")
        return np.asarray(_kernels.hull_support_point(_hull_prepared(spec), f), dtype=float)
    if isinstance(spec, DirectSum):
        return _direct_sum_attaining(spec, f, exact)
    if isinstance(spec, DualOf):
        return supporting_functional(spec.inner, f)
    raise NormSpecError(f"unknown spec {spec!r}")


def _direct_sum_attaining(spec: DirectSum, f, exact: bool):
    blocks = [f[list(coords)] for _, coords in spec.parts]
    s = as_vector([dual_norm(part, b) for (part, _), b in zip(spec.parts, blocks)],
                  exact=exact)
    w = modulus(attaining_point(spec.outer, s))
    x = np.zeros(spec.dim, dtype=object if exact else float)
    if exact:
        x[:] = Fraction(0)
    for (part, coords), b, wk in zip(spec.parts, blocks, w):
        if wk == 0:
            continue
        if all(c == 0 for c in b):
            xk = np.zeros(part.dim, dtype=object if exact else float)
            if exact:
                xk[:] = Fraction(0)
            e0 = as_vector([1] + [0] * (part.dim - 1), exact=exact)
            xk = e0 / norm(part, e0)
        else:
            xk = attaining_point(part, b)
        for c, v in zip(coords, xk):
            x[c] = wk * v
    return x


def _golden_sphere(count: int, dim: int) -> np.ndarray:
    """Deterministic low-discrepancy direction set on the unit l2 sphere."""
    g = 1.32471795724474602596 if dim <= 3 else 1.22074408460575947536
    alphas = np.array([1.0 / g ** (k + 1) for k in range(dim)])
    u = (np.outer(np.arange(1, count + 1), alphas) + 0.5) % 1.0
    from scipy.special import ndtri
    z = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    nz = np.linalg.norm(z, axis=1)
    nz[nz == 0] = 1.0
    return z / nz[:, None]


def attaining_point_sampled(spec: NormSpec, f, n_dirs: int | None = None,
                            refine_steps: int = 50):
    """Sphere-sampling attaining search with golden-section refinement.

    Used when no structural path exists; tolerances are surfaced by the
    caller re-verifying the returned point.
    """
    ff = np.asarray(f, dtype=float)
    dim = spec.dim
    if n_dirs is None:
        n_dirs = 100_000 if dim <= 4 else 20_000
    D = _golden_sphere(n_dirs, dim)
    ns = norm_batch(spec, D)
    P = D / ns[:, None]
    k = int(np.argmax(P @ ff))
    x = P[k]

    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(refine_steps):
        improved = False
        for axis in range(dim):
            e = np.zeros(dim)
            e[axis] = 1.0
            lo, hi = -0.5, 0.5

            def val(t):
                cand = x + t * e
                nv = norm(spec, cand)
                return float(np.dot(cand, ff)) / nv if nv > 0 else -np.inf

            a, b = lo, hi
            fa: dict = {}

            def vv(t):
                if t not in fa:
                    fa[t] = val(t)
                return fa[t]

            c1 = b - phi * (b - a)
            c2 = a + phi * (b - a)
            for _i in range(40):
                if vv(c1) < vv(c2):
                    a, c1 = c1, c2
                    c2 = a + phi * (b - a)
                else:
                    b, c2 = c2, c1
                    c1 = b - phi * (b - a)
            tbest = 0.5 * (a + b)
            if vv(tbest) > float(np.dot(x, ff)) / norm(spec, x) + 1e-15:
                x = x + tbest * e
                improved = True
        x = x / norm(spec, x)
        if not improved:
            break
    return x / norm(spec, x)


# ---------------------------------------------------------------------------
# absoluteness


_ABSOLUTE_FLAGS: set = set()


@dataclass(frozen=True)
class AbsoluteReport:
    ok: bool
    absolute_ok: bool
    normalized_ok: bool
    witness: np.ndarray | None
    flagged: bool
    samples: int

    def __str__(self) -> str:
        if self.ok:
            return f"absolute and normalized ({self.samples} samples)"
        kind = "absoluteness" if not self.absolute_ok else "normalization"
        return f"{kind} violated, witness {self.witness}"


def absolute_check(spec: NormSpec, samples: int = 512, seed: int = 0,
                   tol: float = FLOAT_TOL) -> AbsoluteReport:
    """Verify ||x|| = || |x| || on seeded sample vectors and ||e_i|| = 1;
    flags the spec absolute on success."""
    if samples < 1:
        raise NormSpecError("samples must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    dim = spec.dim
    X = rng.standard_normal((samples, dim))
    X[:: max(1, samples // 7)] *= 0.1
    witness = None
    absolute_ok = True
    na = norm_batch(spec, X)
    nb = norm_batch(spec, np.abs(X))
    rel = np.abs(na - nb) / np.maximum(1.0, np.abs(na))
    bad = np.nonzero(rel > tol)[0]
    if len(bad):
        absolute_ok = False
        witness = X[bad[0]]
    normalized_ok = True
    if absolute_ok:
        E = np.eye(dim)
        ne = norm_batch(spec, E)
        badn = np.nonzero(np.abs(ne - 1.0) > tol)[0]
        if len(badn):
            normalized_ok = False
            witness = E[badn[0]]
    ok = absolute_ok and normalized_ok
    if ok:
        _ABSOLUTE_FLAGS.add(spec)
    return AbsoluteReport(ok=ok, absolute_ok=absolute_ok, normalized_ok=normalized_ok,
                          witness=witness, flagged=ok, samples=samples)


def is_absolute(spec: NormSpec) -> bool:
    return spec in _ABSOLUTE_FLAGS


def require_absolute(spec: NormSpec) -> None:
    """Lattice-property operations demand an absolute spec; unflagged specs
    are checked once with default sampling."""
    if spec in _ABSOLUTE_FLAGS:
        return
    rep = absolute_check(spec)
    if not rep.ok:
        raise NotAbsoluteError(
            f"spec failed the absoluteness check: {rep}")


# ---------------------------------------------------------------------------
# attaining-pair enumeration


@dataclass(frozen=True)
class AttainingPair:
    """(x on the unit sphere, f on the dual unit sphere, f(x) = 1)."""

    x: np.ndarray
    f: np.ndarray
    residual: float
    kind: str


def enumerate_attaining_pairs(spec: NormSpec, exact: bool = False,
                              grid_levels: int = 5) -> list[AttainingPair]:
    """All vertex-facet attaining pairs of a polyhedral ball plus
    deterministic interior grids on every proper face (paired with each
    facet normal supporting the face) and, symmetrically, grids on the dual
    faces paired with their vertex.

    Polyhedral specs of dim <= 4 only; exact over Fractions on request.
    """
    if not is_polyhedral(spec):
        raise NormSpecError("enumerate_attaining_pairs needs a polyhedral spec")
    if spec.dim > POLY_DIM_GUARD:
        raise DimensionGuardError(f"dim {spec.dim} exceeds the enumeration guard")
    poly = polyhedron_of(spec, exact)
    pairs: list[AttainingPair] = []

    def res(x, f) -> float:
        return abs(float(np.dot(np.asarray(x, dtype=float), np.asarray(f, dtype=float))) - 1.0)

    for vi, fi in poly.vertex_facet_pairs():
        v, a = poly.vertices[vi], poly.normals[fi]
        pairs.append(AttainingPair(np.array(v), np.array(a), res(v, a), "vertex-facet"))
    for face in poly.faces():
        verts = [poly.vertices[i] for i in face.vertex_ids]
        grid = barycentric_grid(len(verts), levels=grid_levels)
        for lam in grid:
            if exact:
                x = sum((l * v for l, v in zip(lam, verts)),
                        start=np.array([Fraction(0)] * poly.dim, dtype=object))
            else:
                x = np.sum([float(l) * np.asarray(v, float) for l, v in zip(lam, verts)], axis=0)
            for fi in face.facet_ids:
                a = poly.normals[fi]
                pairs.append(AttainingPair(np.array(x), np.array(a), res(x, a), "face-grid"))
    # dual-side grids: for each vertex, sample the conjugate face of normals
    dual_faces: dict[tuple, list] = {}
    for face in poly.dual().faces():
        dual_faces[face.vertex_ids] = face
    for vi in range(len(poly.vertices)):
        tight = tuple(sorted(np.nonzero(poly.incidence[vi])[0].tolist()))
        if len(tight) < 2:
            continue
        normals = [poly.normals[j] for j in tight]
        grid = barycentric_grid(len(normals), levels=grid_levels)
        v = poly.vertices[vi]
        for lam in grid:
            if exact:
                g = sum((l * a for l, a in zip(lam, normals)),
                        start=np.array([Fraction(0)] * poly.dim, dtype=object))
            else:
                g = np.sum([float(l) * np.asarray(a, float) for l, a in zip(lam, normals)], axis=0)
            pairs.append(AttainingPair(np.array(v), np.array(g), res(v, g), "vertex-dualgrid"))
    return pairs
