"""Low-dimensional polytope machinery: vertex/facet enumeration, the face
lattice of symmetric unit balls, and halfspace cuts.

Everything here is desk scale by design: enumeration is brute force over
n-subsets of generators or constraints, which is exact over
:class:`fractions.Fraction` scalars and robust in float mode for dim <= 4.
No external geometry dependency is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .riesz import is_exact

FEAS_TOL = 1e-9
DEDUP_DECIMALS = 9


class EnumerationError(ValueError):
    """Raised when a generating set cannot define a norm ball."""


# ---------------------------------------------------------------------------
# exact linear algebra on Fractions


def solve_exact(A, b):
    """Solve the square system A x = b over Fractions.

    Returns None when A is singular.
    """
    n = len(b)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col]
        M[col] = [v / inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[col])]
    return np.array([M[i][n] for i in range(n)], dtype=object)


def exact_rank(rows) -> int:
    """Rank of a list of Fraction row vectors."""
    M = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = M[row][col]
        M[row] = [v / inv for v in M[row]]
        for r in range(len(M)):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[row])]
        row += 1
        rank += 1
        if row == len(M):
            break
    return rank


def _rank(rows, exact: bool) -> int:
    if len(rows) == 0:
        return 0
    if exact:
        return exact_rank(rows)
    return int(np.linalg.matrix_rank(np.asarray(rows, dtype=float), tol=1e-8))


def _dedup(points, exact: bool):
    out, seen = [], set()
    for p in points:
        key = tuple(p) if exact else tuple(np.round(np.asarray(p, float), DEDUP_DECIMALS) + 0.0)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def _as_matrix(rows, exact: bool) -> np.ndarray:
    if exact:
        M = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                M[i, j] = Fraction(v)
        return M
    return np.asarray(rows, dtype=float)


# ---------------------------------------------------------------------------
# brute-force enumeration cores


def hpoly_vertices(A: np.ndarray, b, exact: bool = False, feas_tol: float = FEAS_TOL):
    """Vertices of {x : A x <= b} by enumeration of n-subsets of constraints.

    Returns (vertices, tight) where tight[k] is the boolean mask of
    constraints active at vertex k.  The polytope must be bounded; unbounded
    input simply yields the vertices of the bounded part reachable from
    basis intersections, so callers pass bounded systems.
    """
    m, n = A.shape
    if m < n:
        return [], []
    cand = []
    if exact:
        for idx in combinations(range(m), n):
            x = solve_exact([A[i] for i in idx], [b[i] for i in idx])
            if x is not None:
                cand.append(x)
    else:
        idxs = np.array(list(combinations(range(m), n)))
        mats = A[idxs]
        rhs = np.asarray(b, dtype=float)[idxs]
        dets = np.abs(np.linalg.det(mats))
        scale = np.maximum(np.abs(mats).max(axis=(1, 2)) ** n, 1e-30)
        good = dets > 1e-10 * scale
        if good.any():
            sols = np.linalg.solve(mats[good], rhs[good][..., None])[..., 0]
            cand = list(sols)
    verts, tights = [], []
    bvec = np.asarray(b) if not exact else b
    for x in cand:
        vals = A @ x
        if exact:
            if all(v <= bi for v, bi in zip(vals, bvec)):
                verts.append(x)
                tights.append(np.array([v == bi for v, bi in zip(vals, bvec)]))
        else:
            if np.all(vals <= np.asarray(bvec, float) + feas_tol):
                verts.append(x)
                tights.append(np.abs(vals - np.asarray(bvec, float)) <= 10 * feas_tol)
    # dedupe, merging tight sets of coincident vertices
    merged = {}
    order = []
    for v, t in zip(verts, tights):
        key = tuple(v) if exact else tuple(np.round(np.asarray(v, float), DEDUP_DECIMALS) + 0.0)
        if key in merged:
            merged[key] = (merged[key][0], merged[key][1] | t)
        else:
            merged[key] = (v, t)
            order.append(key)
    verts = [merged[k][0] for k in order]
    tights = [merged[k][1] for k in order]
    return verts, tights


def edges_from_tights(A, verts, tights, exact: bool = False):
    """Edges (i, j) of the polytope: vertex pairs whose common active
    constraints have rank n-1."""
    n = A.shape[1]
    out = []
    for i, j in combinations(range(len(verts)), 2):
        common = np.nonzero(tights[i] & tights[j])[0]
        if len(common) < n - 1:
            continue
        if _rank([A[k] for k in common], exact) == n - 1:
            out.append((i, j))
    return out


def cut_vertices(A, verts, edges, c, c0, exact: bool = False, feas_tol: float = FEAS_TOL):
    """Vertices of P intersected with the halfspace {<c, x> >= c0}.

    P is given by its vertices and edges; new vertices appear where edges
    cross the cutting hyperplane.
    """
    vals = [sum(ci * xi for ci, xi in zip(c, v)) for v in verts]
    keep = []
    tol = 0 if exact else feas_tol
    for v, val in zip(verts, vals):
        if val >= c0 - tol:
            keep.append(v)
    for i, j in edges:
        vi, vj = vals[i], vals[j]
        lo, hi = (i, j) if vi < vj else (j, i)
        if vals[lo] < c0 - tol and vals[hi] > c0 + tol:
            t = (c0 - vals[lo]) / (vals[hi] - vals[lo])
            keep.append(verts[lo] + t * (verts[hi] - verts[lo]))
    return _dedup(keep, exact)


# ---------------------------------------------------------------------------
# symmetric unit balls


@dataclass(frozen=True)
class Face:
    """A proper face of the ball: vertex indices, tight facet indices, dim."""

    vertex_ids: tuple
    facet_ids: tuple
    dim: int


class Polyhedron:
    """A centrally symmetric polytope with both descriptions.

    The body is conv(vertices) = {x : <a, x> <= 1 for every facet normal a}.
    Both ``vertices`` and ``normals`` store the full +/- symmetric set, so
    the gauge is max(normals @ x) and the support is max(vertices @ f)
    without absolute values.
    """

    def __init__(self, vertices: np.ndarray, normals: np.ndarray, exact: bool):
        self.vertices = vertices
        self.normals = normals
        self.exact = exact
        self.dim = vertices.shape[1]
        one = Fraction(1) if exact else 1.0
        prod = vertices @ normals.T
        if exact:
            self.incidence = np.array(
                [[prod[i, j] == one for j in range(normals.shape[0])]
                 for i in range(vertices.shape[0])], dtype=bool)
        else:
            self.incidence = np.abs(np.asarray(prod, float) - 1.0) <= 1e-7
        self._faces_cache = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_vertices(points, exact: bool = False) -> "Polyhedron":
        """Build from a generating point set (must already contain -p for
        every p).  Non-extreme generators are pruned."""
        P = _as_matrix(_dedup(list(points), exact), exact)
        m, n = P.shape
        if _rank(list(P), exact) < n:
            raise EnumerationError("generating set does not span the space")
        normals = []
        ones = [Fraction(1)] * n if exact else np.ones(n)
        for idx in combinations(range(m), n):
            rows = [P[i] for i in idx]
            if exact:
                a = solve_exact(rows, ones)
            else:
                M = np.asarray(rows, float)
                if abs(np.linalg.det(M)) <= 1e-12 * max(np.abs(M).max() ** n, 1e-30):
                    continue
                a = np.linalg.solve(M, ones)
            if a is None:
                continue
            vals = P @ a
            if exact:
                if all(v <= 1 for v in vals):
                    normals.append(a)
            else:
                if np.all(np.asarray(vals, float) <= 1.0 + FEAS_TOL):
                    normals.append(a)
        normals = _dedup(normals, exact)
        if not normals:
            raise EnumerationError("no supporting facets found (degenerate set)")
        N = _as_matrix(normals, exact)
        # facets must come in +/- pairs for a symmetric body; enforce closure
        N = _as_matrix(_dedup(list(N) + list(-N), exact), exact)
        # prune non-extreme generators: a vertex has active normals of full rank
        prod = P @ N.T
        keep = []
        for i in range(m):
            if exact:
                act = [N[j] for j in range(N.shape[0]) if prod[i, j] == 1]
            else:
                act = [N[j] for j in range(N.shape[0])
                       if abs(float(prod[i, j]) - 1.0) <= 1e-7]
            if len(act) >= n and _rank(act, exact) == n:
                keep.append(P[i])
        if not keep:
            raise EnumerationError("no extreme points survive pruning")
        V = _as_matrix(keep, exact)
        return Polyhedron(V, N, exact)

    @staticmethod
    def from_normals(normals, exact: bool = False) -> "Polyhedron":
        """Build from the facet description {x : <a, x> <= 1} (the list must
        contain -a for every a).  Redundant constraints are dropped."""
        N0 = _as_matrix(_dedup(list(normals), exact), exact)
        m, n = N0.shape
        if _rank(list(N0), exact) < n:
            raise EnumerationError("constraint normals do not span the space")
        ones = [Fraction(1)] * m if exact else np.ones(m)
        verts, tights = hpoly_vertices(N0, ones, exact=exact)
        if not verts:
            raise EnumerationError("empty vertex set (unbounded or degenerate)")
        V = _as_matrix(verts, exact)
        # keep only normals supporting a true facet: tight set of affine rank n-1
        keep = []
        for j in range(m):
            tv = [verts[i] for i in range(len(verts)) if tights[i][j]]
            if len(tv) < n:
                continue
            diffs = [tv[k] - tv[0] for k in range(1, len(tv))]
            if _rank(diffs, exact) == n - 1:
                keep.append(N0[j])
        if not keep:
            raise EnumerationError("no facets found")
        N = _as_matrix(keep, exact)
        return Polyhedron(V, N, exact)

    # -- geometry -----------------------------------------------------------

    def gauge(self, x):
        vals = self.normals @ x
        return max(vals) if self.exact else float(np.max(vals))

    def gauge_batch(self, X: np.ndarray) -> np.ndarray:
        return np.max(X @ np.asarray(self.normals, float).T, axis=1)

    def support(self, f):
        vals = self.vertices @ f
        return max(vals) if self.exact else float(np.max(vals))

    def support_argmax(self, f) -> int:
        vals = self.vertices @ f
        if self.exact:
            best = max(vals)
            return next(i for i, v in enumerate(vals) if v == best)
        return int(np.argmax(np.asarray(vals, float)))

    def gauge_argmax(self, x) -> int:
        vals = self.normals @ x
        if self.exact:
            best = max(vals)
            return next(i for i, v in enumerate(vals) if v == best)
        return int(np.argmax(np.asarray(vals, float)))

    def dual(self) -> "Polyhedron":
        """Polar body: vertices and facet normals swap roles."""
        return Polyhedron(self.normals, self.vertices, self.exact)

    # -- combinatorics ------------------------------------------------------

    def vertex_facet_pairs(self):
        """All incidences (vertex index, facet index)."""
        vs, fs = np.nonzero(self.incidence)
        return list(zip(vs.tolist(), fs.tolist()))

    def faces(self) -> list[Face]:
        """All proper faces of dimension 1 .. dim-1.

        Faces are the nonempty intersections of facet vertex sets; the facet
        id tuple of a face lists every facet containing it, whose normals
        span the conjugate face of the polar body.
        """
        if self._faces_cache is not None:
            return self._faces_cache
        nv, nf = self.incidence.shape
        base = [frozenset(np.nonzero(self.incidence[:, j])[0].tolist()) for j in range(nf)]
        seen = set(s for s in base if s)
        frontier = set(seen)
        while frontier:
            new = set()
            for fs in frontier:
                for b in base:
                    inter = fs & b
                    if inter and inter not in seen:
                        seen.add(inter)
                        new.add(inter)
            frontier = new
        out = []
        for vset in seen:
            ids = tuple(sorted(vset))
            pts = [self.vertices[i] for i in ids]
            d = 0 if len(pts) == 1 else _rank([p - pts[0] for p in pts[1:]], self.exact)
            if not 1 <= d <= self.dim - 1:
                continue
            facet_ids = tuple(j for j in range(nf) if all(self.incidence[i, j] for i in ids))
            out.append(Face(vertex_ids=ids, facet_ids=facet_ids, dim=d))
        out.sort(key=lambda f: (f.dim, f.vertex_ids))
        self._faces_cache = out
        return out


def barycentric_grid(k: int, levels: int = 5):
    """Deterministic interior grid on the (k-1)-simplex.

    Returns all strictly positive rational weight vectors c / (levels + 1)
    with integer entries summing to levels + 1.  For k = 2 this is exactly
    ``levels`` interior points.
    """
    total = levels + 1
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            if remaining >= 1:
                out.append(prefix + [remaining])
            return
        for c in range(1, remaining - slots + 2):
            rec(prefix + [c], remaining - c, slots - 1)

    rec([], total, k)
    return [[Fraction(c, total) for c in combo] for combo in out]


def symmetrize(points, sign_flips: bool, exact: bool = False):
    """Close a generator set under negation and, optionally, under all
    coordinate sign flips."""
    pts = [np.array(p, dtype=object if exact else float) for p in points]
    out = []
    if sign_flips:
        n = len(pts[0])
        from itertools import product
        for p in pts:
            for signs in product((1, -1), repeat=n):
                q = np.array([s * c for s, c in zip(signs, p)],
                             dtype=object if exact else float)
                out.append(q)
    else:
        for p in pts:
            out.append(p)
            out.append(-p)
    return _dedup(out, exact)
