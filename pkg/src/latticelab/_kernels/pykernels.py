"""Pure-Python gauge kernels.

These are the reference implementations of the two hot paths:

* ``facet_gauge`` for polyhedral norms given by facet functionals, and
* ``hull_gauge`` for norms whose unit ball is the convex hull of simple
  pieces (coordinate-plane disks and finite point sets).

``hull_gauge`` maintains certified two-sided bounds.  A support-oracle
projection routine (Gilbert-style outer iteration with Wolfe's
minimum-norm-point subproblem on the active atoms) measures the distance d
from a scaled query x/t to the ball K; every query tightens the upper
bound through gamma <= t (1 + d / rho) with rho a precomputed inradius
lower bound, and every separating direction c tightens the lower bound
through the dual-feasible certificate <c, x> / h_K(c).  Once the active
pieces are identified, a Newton solve on the KKT system of
max{<f, x> : piece supports <= 1} polishes the value to machine precision;
the polished point is re-verified on both sides, so a failed polish only
costs accuracy already guaranteed by the bracket.

The compiled twin in ``cykernels.pyx`` implements the same procedures; the
benchmark in ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

from math import hypot, sqrt

import numpy as np

BACKEND = "py"


# ---------------------------------------------------------------------------
# facet kernels


def facet_gauge(F: np.ndarray, x) -> float:
    """max over rows of <F_i, x>; F holds the full +/- symmetric set."""
    return float(np.max(F @ np.asarray(x, dtype=float)))


def facet_gauge_batch(F: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.max(np.asarray(X, dtype=float) @ F.T, axis=1)


# ---------------------------------------------------------------------------
# hull kernels


def prepare_hull(disks: np.ndarray, points: np.ndarray):
    """Precompute the per-spec data used by the hull kernels.

    ``disks`` has rows (i, j, r_i, r_j) describing an ellipse in the
    coordinate plane (i, j); ``points`` is the full symmetrized point set.
    Returns (disk list, point list, circumradius, inradius lower bound).
    """
    dl = [(int(i), int(j), float(ra), float(rb))
          for i, j, ra, rb in np.asarray(disks, dtype=float).reshape(-1, 4)]
    P = np.asarray(points, dtype=float)
    if P.ndim != 2:
        P = P.reshape(-1, P.shape[-1])
    n = P.shape[1]
    pl = [tuple(map(float, p)) for p in P]
    r2 = 0.0
    for _, _, ra, rb in dl:
        r2 = max(r2, ra, rb)
    for p in pl:
        r2 = max(r2, sqrt(sum(c * c for c in p)))
    if r2 <= 0.0:
        raise ValueError("hull has no extent")
    # inradius lower bound: K contains conv(+/- rows) of the stacked piece
    # atoms, whose inradius is at least sigma_min / sqrt(row count)
    rows = [list(p) for p in pl if any(p)]
    for i, j, ra, rb in dl:
        ei = [0.0] * n
        ej = [0.0] * n
        ei[i] = ra
        ej[j] = rb
        rows.append(ei)
        rows.append(ej)
    M = np.asarray(rows, dtype=float).reshape(-1, n)
    sig = np.linalg.svd(M, compute_uv=False) if len(M) else np.zeros(1)
    rank = int(np.sum(sig > 1e-12 * max(sig[0] if len(sig) else 0.0, 1e-300)))
    if len(M) < n or rank < n:
        raise ValueError("hull pieces do not span the space")
    rho = float(sig[n - 1] / sqrt(len(rows)))
    return (dl, pl, r2, rho)


def hull_support(prepared, f) -> float:
    """Support function value max{<f, u> : u in the ball}."""
    disks, points, _, _ = prepared
    fv = [float(c) for c in f]
    best = 0.0
    for i, j, ra, rb in disks:
        v = hypot(ra * fv[i], rb * fv[j])
        if v > best:
            best = v
    for p in points:
        v = 0.0
        for fc, pc in zip(fv, p):
            v += fc * pc
        if v > best:
            best = v
    return best


def hull_support_point(prepared, f):
    """A point of the ball attaining the support in direction f."""
    disks, points, _, _ = prepared
    fv = [float(c) for c in f]
    _, pt, _ = _support(disks, points, fv)
    return np.array(pt)


def _support(disks, points, c):
    """(value, point, piece id) of the support oracle in direction c.

    Piece ids: disks come first, then the point atoms.
    """
    n = len(c)
    best = None
    best_pt = None
    best_id = -1
    for k, (i, j, ra, rb) in enumerate(disks):
        a = ra * c[i]
        b = rb * c[j]
        v = hypot(a, b)
        if best is None or v > best:
            pt = [0.0] * n
            if v > 0.0:
                pt[i] = ra * a / v
                pt[j] = rb * b / v
            best, best_pt, best_id = v, pt, k
    nd = len(disks)
    for k, p in enumerate(points):
        v = 0.0
        for cc, pc in zip(c, p):
            v += cc * pc
        if best is None or v > best:
            best, best_pt, best_id = v, list(p), nd + k
    return best, best_pt, best_id


def _affine_min_norm(S, w):
    """Weights of the norm-minimal affine combination of S relative to w.

    Solves the KKT system of min ||sum a_i (s_i - w)||^2 s.t. sum a_i = 1.
    Returns None when the system is singular.
    """
    k = len(S)
    n = len(w)
    M = [[0.0] * (k + 2) for _ in range(k + 1)]
    for a in range(k):
        sa = S[a][1]
        for b in range(a, k):
            sb = S[b][1]
            g = 0.0
            for d in range(n):
                g += (sa[d] - w[d]) * (sb[d] - w[d])
            M[a][b] = g
            M[b][a] = g
        M[a][k] = 1.0
    for b in range(k):
        M[k][b] = 1.0
    M[k][k + 1] = 1.0
    size = k + 1
    for col in range(size):
        piv = max(range(col, size), key=lambda r: abs(M[r][col]))
        if abs(M[piv][col]) < 1e-13:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1.0 / M[col][col]
        row = M[col]
        for cc in range(col, size + 1):
            row[cc] *= inv
        for r in range(size):
            if r != col and M[r][col] != 0.0:
                f = M[r][col]
                rr = M[r]
                for cc in range(col, size + 1):
                    rr[cc] -= f * row[cc]
    return [M[a][size] for a in range(k)]


def hull_distance(prepared, w, state=None, max_iter=200, gap_tol=1e-12,
                  dist_tol=1e-14):
    """Distance from w to the ball with a separation certificate.

    Returns (upper, lower, direction, state): ``upper`` bounds the distance
    from above via the best feasible point found, ``lower`` is a certified
    lower bound (possibly 0), ``direction`` is the outward direction at the
    best point (None when w is essentially inside), and ``state`` carries
    the weighted active atoms (pid, point, weight) for warm starts and for
    active-set identification.

    Both bounds are valid at any iteration count; ``gap_tol`` only controls
    tightness on exit.
    """
    disks, points, _, _ = prepared
    wv = [float(c) for c in w]
    n = len(wv)
    if state:
        S = [(pid, list(pt)) for pid, pt, _lam in state]
        lam = [1.0 / len(S)] * len(S)
    else:
        _, s0, pid0 = _support(disks, points, wv if any(wv) else [1.0] * n)
        S = [(pid0, s0)]
        lam = [1.0]

    def combo():
        p = [0.0] * n
        for li, (_pid, si) in zip(lam, S):
            for d in range(n):
                p[d] += li * si[d]
        return p

    def pack():
        return [(pid, pt, li) for (pid, pt), li in zip(S, lam)]

    p = combo()
    best_lower = 0.0
    dist = 0.0
    c = None
    for _ in range(max_iter):
        c = [wv[d] - p[d] for d in range(n)]
        dist = sqrt(sum(cc * cc for cc in c))
        if dist <= dist_tol:
            return 0.0, 0.0, None, pack()
        hval, spt, spid = _support(disks, points, c)
        cw = 0.0
        for cc, ww in zip(c, wv):
            cw += cc * ww
        lower = (cw - hval) / dist
        if lower > best_lower:
            best_lower = lower
        gap = hval - (cw - dist * dist)
        if gap <= gap_tol:
            return dist, max(best_lower, 0.0), c, pack()
        S.append((spid, spt))
        lam.append(0.0)
        for _minor in range(3 * (n + 2)):
            alpha = _affine_min_norm(S, wv)
            if alpha is None:
                drop = min(range(len(S) - 1), key=lambda i: lam[i])
                del S[drop], lam[drop]
                continue
            if min(alpha) > 1e-12:
                lam = alpha
                break
            theta = 1.0
            for i, ai in enumerate(alpha):
                if ai <= 1e-12 and lam[i] > ai:
                    theta = min(theta, lam[i] / (lam[i] - ai))
            lam = [(1.0 - theta) * li + theta * ai for li, ai in zip(lam, alpha)]
            keep = [i for i, li in enumerate(lam) if li > 1e-12]
            if not keep:
                keep = [len(S) - 1]
            S = [S[i] for i in keep]
            lam = [lam[i] for i in keep]
            tot = sum(lam)
            lam = [li / tot for li in lam]
        p = combo()
    return dist, max(best_lower, 0.0), c, pack()


def _certify(prepared, xv, f, weights):
    """Certified (lower, upper) gauge bounds from a dual candidate f and
    primal piece weights.

    f is scaled to the exact dual sphere via the full support evaluation,
    giving the rigorous lower bound <f, x> / h_K(f).  The weights list
    holds (pid, atom) pairs with nonnegative weights w_k; the atoms are
    exact members of their pieces, so y = sum w_k a_k / sum w_k is in K and
    gamma <= sum w_k (1 + |x - sum w_k a_k| / (rho sum w_k)).
    """
    disks, points, _, rho = prepared
    n = len(xv)
    h = hull_support(prepared, f)
    lower = 0.0
    if h > 0.0:
        s = 0.0
        for fc, xc in zip(f, xv):
            s += fc * xc
        lower = s / h
    total = 0.0
    rec = [0.0] * n
    for w, atom in weights:
        if w < -1e-11:
            return lower, None
        w = max(w, 0.0)
        total += w
        for d in range(n):
            rec[d] += w * atom[d]
    if total <= 0.0:
        return lower, None
    err = sqrt(sum((xc - rc) ** 2 for xc, rc in zip(xv, rec)))
    upper = total * (1.0 + err / (rho * total))
    return lower, upper


def _newton_polish(prepared, xv, state, f_init=None):
    """Solve max{<f, x> : active piece supports = 1} by Newton on the KKT
    system, starting from the active set suggested by the projection state
    and from the outward direction of the last query (the reliable seed;
    a square active-set system has spurious roots elsewhere).

    A negative primal weight means a spurious active piece; it is dropped
    and the solve retried, as in nonnegative least squares.  Returns
    certified (lower, upper) bounds or None when the model is degenerate;
    verification never trusts the Newton output.
    """
    disks, points, _, _ = prepared
    act_disks = []
    act_points = []
    for pid, pt, w in state:
        if w <= 1e-10:
            continue
        if pid < len(disks):
            if pid not in act_disks:
                act_disks.append(pid)
        else:
            if pid not in [q for q, _ in act_points]:
                act_points.append((pid, points[pid - len(disks)]))
    blo, bhi = 0.0, None
    for _attempt in range(4):
        out = _newton_solve(prepared, xv, act_disks, act_points, f_init)
        if out is None:
            break
        lower, upper, bad_piece = out
        if lower > blo:
            blo = lower
        if upper is not None and (bhi is None or upper < bhi):
            bhi = upper
        if bad_piece is None:
            break
        kind, idx = bad_piece
        if kind == "disk":
            act_disks = [d for d in act_disks if d != idx]
        else:
            act_points = [(q, p) for q, p in act_points if q != idx]
        if not act_disks and not act_points:
            break
    if blo == 0.0 and bhi is None:
        return None
    return blo, bhi


def _newton_solve(prepared, xv, act_disks, act_points, f_init=None):
    """One Newton solve for a fixed active set; returns (lower, upper,
    worst_negative_piece) with upper None when a weight is negative."""
    disks, points, _, _ = prepared
    n = len(xv)
    m = len(act_disks) + len(act_points)
    if m == 0 or m > n:
        return None
    A = np.array([p for _, p in act_points], dtype=float).reshape(len(act_points), n)
    x = np.asarray(xv, dtype=float)

    if f_init is not None:
        f = np.asarray(f_init, dtype=float)
        h0 = hull_support(prepared, f)
        f = f / h0 if h0 > 0 else x / max(np.linalg.norm(x), 1e-300)
    else:
        f = x / max(np.linalg.norm(x), 1e-300)
    for _ in range(60):
        # residuals
        grads = []
        for k in act_disks:
            i, j, ra, rb = disks[k]
            g = hypot(ra * f[i], rb * f[j])
            if g <= 1e-14:
                return None
            q = np.zeros(n)
            q[i] = ra * ra * f[i] / g
            q[j] = rb * rb * f[j] / g
            grads.append((g, q, (i, j, ra, rb)))
        B = np.column_stack([A.T] + [q[:, None] for _, q, _ in grads]) \
            if len(act_points) or grads else None
        if B is None:
            return None
        w, *_ = np.linalg.lstsq(B, x, rcond=None)
        # KKT residual
        r1 = x - B @ w
        r2 = []
        for _, p in act_points:
            r2.append(1.0 - float(np.dot(p, f)))
        for g, _, _ in grads:
            r2.append(1.0 - g)
        res = np.concatenate([r1, np.asarray(r2)])
        if np.max(np.abs(res)) <= 1e-13:
            break
        # Newton step on (f, w)
        H = np.zeros((n, n))
        for (g, q, (i, j, ra, rb)), wk in zip(grads, w[len(act_points):]):
            Hd = np.zeros((n, n))
            Hd[i, i] = ra * ra / g
            Hd[j, j] = rb * rb / g
            Hd[i, i] -= q[i] * q[i] / g
            Hd[i, j] -= q[i] * q[j] / g
            Hd[j, i] -= q[j] * q[i] / g
            Hd[j, j] -= q[j] * q[j] / g
            H += wk * Hd
        KKT = np.zeros((n + m, n + m))
        KKT[:n, :n] = -H
        KKT[:n, n:] = -B
        rows = []
        for _, p in act_points:
            rows.append(p)
        for _, q, _ in grads:
            rows.append(q)
        KKT[n:, :n] = -np.asarray(rows)
        try:
            delta = np.linalg.solve(KKT, -res)
        except np.linalg.LinAlgError:
            return None
        f = f + delta[:n]
        if not np.all(np.isfinite(f)):
            return None
    else:
        return None
    # assemble certified bounds: weights pair with exact piece atoms
    weights = []
    bad = None
    bad_val = -1e-11
    for (pid_, p), wk in zip(act_points, w[:len(act_points)]):
        weights.append((float(wk), list(p)))
        if wk < bad_val:
            bad_val = wk
            bad = ("point", pid_)
    for t, ((g, q, (i, j, ra, rb)), wk) in enumerate(zip(grads, w[len(act_points):])):
        atom = [0.0] * n
        if g > 0:
            atom[i] = ra * (ra * f[i] / g)
            atom[j] = rb * (rb * f[j] / g)
        weights.append((float(wk), atom))
        if wk < bad_val:
            bad_val = wk
            bad = ("disk", act_disks[t])
    lower, upper = _certify(prepared, xv, list(f), weights)
    return lower, upper, bad


def hull_gauge(prepared, x, rel_tol: float = 1e-9) -> float:
    """Gauge of x for the hull ball, certified to ``rel_tol`` relatively.

    Phase 1 brackets the gauge with distance queries; phase 2 polishes the
    value through the active-set Newton solve; a safeguarded bisection on
    the certified bounds finishes the rare unpolished cases.
    """
    disks, points, r2, rho = prepared
    xv = [float(c) for c in x]
    x2 = sqrt(sum(c * c for c in xv))
    if x2 == 0.0:
        return 0.0
    lo = x2 / r2
    hi = None
    state = None
    last_dir = None

    def query(t, gap_tol, max_iter):
        nonlocal lo, hi, state, last_dir
        q = [c / t for c in xv]
        d, _dlb, cdir, state = hull_distance(prepared, q, state,
                                             max_iter=max_iter, gap_tol=gap_tol)
        if cdir is not None:
            last_dir = cdir
        cand = t * (1.0 + d / rho)
        if hi is None or cand < hi:
            hi = cand
        if cdir is not None:
            hval = hull_support(prepared, cdir)
            if hval > 0.0:
                cert = 0.0
                for cc, xc in zip(cdir, xv):
                    cert += cc * xc
                cert /= hval
                if cert > lo:
                    lo = cert

    def polish():
        nonlocal lo, hi
        polished = _newton_polish(prepared, xv, state or [], f_init=last_dir)
        if polished is None:
            return
        plo, phi = polished
        if plo > lo:
            lo = plo
        if phi is not None and phi < hi:
            hi = phi

    # phase 1: rough bracket identifying the active pieces
    t = lo
    for _ in range(3):
        query(t, gap_tol=1e-7 * max(1.0, lo), max_iter=60)
        if hi - lo <= rel_tol * hi:
            return hi
        t = lo if t < lo else 0.5 * (lo + hi)
    # phase 2: active-set Newton polish to machine precision
    polish()
    if hi - lo <= rel_tol * hi:
        return hi
    # phase 3: safeguarded tightening for degenerate active sets
    for _ in range(60):
        query(0.5 * (lo + hi), gap_tol=1e-13, max_iter=250)
        polish()
        if hi - lo <= rel_tol * hi:
            return hi
    return hi


def hull_gauge_batch(prepared, X: np.ndarray, rel_tol: float = 1e-9) -> np.ndarray:
    return np.array([hull_gauge(prepared, row, rel_tol) for row in np.asarray(X, dtype=float)])
