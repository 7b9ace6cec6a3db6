# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled gauge kernels: the hot twin of ``pykernels``.

Implements the same procedures (facet gauge; hull gauge through certified
two-sided bounds with the support-oracle projection and the active-set
Newton polish).  The pure-Python module is the reference; the equivalence
suite asserts agreement to 1e-9 and the benchmark measures the speedup.
"""

from libc.math cimport fabs, hypot, sqrt

import numpy as np

BACKEND = "cy"

DEF MAXN = 8
DEF MAXA = 12
DEF MAXC = 14


# ---------------------------------------------------------------------------
# facet kernels


def facet_gauge(F, x):
    cdef double[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double best = -1e300, acc
    for i in range(Fv.shape[0]):
        acc = 0.0
        for j in range(Fv.shape[1]):
            acc += Fv[i, j] * xv[j]
        if acc > best:
            best = acc
    return best


def facet_gauge_batch(F, X):
    Xa = np.ascontiguousarray(X, dtype=np.float64)
    Fa = np.ascontiguousarray(F, dtype=np.float64)
    return np.max(Xa @ Fa.T, axis=1)


# ---------------------------------------------------------------------------
# hull data


def prepare_hull(disks, points):
    """Validated, typed copy of the hull data (see the pure twin)."""
    from . import pykernels
    dl, pl, r2, rho = pykernels.prepare_hull(disks, points)
    D = np.asarray([[i, j, ra, rb] for i, j, ra, rb in dl], dtype=np.float64).reshape(-1, 4)
    P = np.asarray(pl, dtype=np.float64)
    if P.ndim != 2:
        P = P.reshape(0, max(1, D.shape[0] and int(max(D[:, 1])) + 1))
    return (np.ascontiguousarray(D), np.ascontiguousarray(P), float(r2), float(rho))


def hull_support(prepared, f):
    cdef double[:, ::1] D = prepared[0]
    cdef double[:, ::1] P = prepared[1]
    cdef double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    return _support_value(D, P, &fv[0], fv.shape[0])


cdef double _support_value(double[:, ::1] D, double[:, ::1] P, double* c, Py_ssize_t n) noexcept nogil:
    cdef double best = 0.0, v
    cdef Py_ssize_t k, t
    for k in range(D.shape[0]):
        v = hypot(D[k, 2] * c[<Py_ssize_t> D[k, 0]], D[k, 3] * c[<Py_ssize_t> D[k, 1]])
        if v > best:
            best = v
    for k in range(P.shape[0]):
        v = 0.0
        for t in range(n):
            v += c[t] * P[k, t]
        if v > best:
            best = v
    return best


cdef Py_ssize_t _support_point(double[:, ::1] D, double[:, ::1] P, double* c,
                               Py_ssize_t n, double* out, double* val) noexcept nogil:
    """Fills out[0..n) with the support point, returns the piece id."""
    cdef double best = -1e300, v, a, b
    cdef Py_ssize_t k, t, bid = -1
    cdef Py_ssize_t i, j
    for k in range(D.shape[0]):
        a = D[k, 2] * c[<Py_ssize_t> D[k, 0]]
        b = D[k, 3] * c[<Py_ssize_t> D[k, 1]]
        v = hypot(a, b)
        if v > best:
            best = v
            bid = k
    for k in range(P.shape[0]):
        v = 0.0
        for t in range(n):
            v += c[t] * P[k, t]
        if v > best:
            best = v
            bid = D.shape[0] + k
    for t in range(n):
        out[t] = 0.0
    if bid < D.shape[0]:
        i = <Py_ssize_t> D[bid, 0]
        j = <Py_ssize_t> D[bid, 1]
        a = D[bid, 2] * c[i]
        b = D[bid, 3] * c[j]
        v = hypot(a, b)
        if v > 0.0:
            out[i] = D[bid, 2] * a / v
            out[j] = D[bid, 3] * b / v
    else:
        for t in range(n):
            out[t] = P[bid - D.shape[0], t]
    val[0] = best
    return bid


def hull_support_point(prepared, f):
    cdef double[:, ::1] D = prepared[0]
    cdef double[:, ::1] P = prepared[1]
    cdef double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef double out[MAXN]
    cdef double val
    cdef Py_ssize_t n = fv.shape[0]
    _support_point(D, P, &fv[0], n, out, &val)
    res = np.empty(n)
    cdef Py_ssize_t t
    for t in range(n):
        res[t] = out[t]
    return res


# ---------------------------------------------------------------------------
# Wolfe minimum-norm point over the active atoms


cdef bint _affine_min_norm(double* S, Py_ssize_t k, Py_ssize_t n, double* w,
                           double* alpha) noexcept nogil:
    """alpha <- weights of the min-norm affine combination of the k atoms
    (rows of S, stride MAXN) relative to w; returns False when singular."""
    cdef double M[MAXA + 1][MAXA + 2]
    cdef Py_ssize_t a, b, d, col, r, piv, size
    cdef double g, inv, f, mx
    size = k + 1
    for a in range(size):
        for b in range(size + 1):
            M[a][b] = 0.0
    for a in range(k):
        for b in range(a, k):
            g = 0.0
            for d in range(n):
                g += (S[a * MAXN + d] - w[d]) * (S[b * MAXN + d] - w[d])
            M[a][b] = g
            M[b][a] = g
        M[a][k] = 1.0
    for b in range(k):
        M[k][b] = 1.0
    M[k][size] = 1.0
    for col in range(size):
        piv = col
        mx = fabs(M[col][col])
        for r in range(col + 1, size):
            if fabs(M[r][col]) > mx:
                mx = fabs(M[r][col])
                piv = r
        if mx < 1e-13:
            return False
        if piv != col:
            for b in range(size + 1):
                g = M[col][b]
                M[col][b] = M[piv][b]
                M[piv][b] = g
        inv = 1.0 / M[col][col]
        for b in range(col, size + 1):
            M[col][b] *= inv
        for r in range(size):
            if r != col and M[r][col] != 0.0:
                f = M[r][col]
                for b in range(col, size + 1):
                    M[r][b] -= f * M[col][b]
    for a in range(k):
        alpha[a] = M[a][size]
    return True


cdef struct DistResult:
    double dist
    double lower
    bint has_dir
    Py_ssize_t natoms


cdef DistResult _distance(double[:, ::1] D, double[:, ::1] P, double* w, Py_ssize_t n,
                          double* S, Py_ssize_t* pid, double* lam, Py_ssize_t* k_io,
                          double* cdir, int max_iter, double gap_tol,
                          double dist_tol) noexcept nogil:
    """Distance from w to the hull; S/pid/lam carry the active atoms in and
    out (warm starts).  cdir receives the outward direction."""
    cdef DistResult res
    cdef Py_ssize_t k = k_io[0]
    cdef double p[MAXN]
    cdef double c[MAXN]
    cdef double spt[MAXN]
    cdef double alpha[MAXA]
    cdef double best_lower = 0.0
    cdef double dist, hval, cw, lower, gap, sval, theta, tot
    cdef Py_ssize_t it, d, a, minor, drop, keep
    cdef bint okflag
    cdef double drop_val
    res.has_dir = False
    if k <= 0:
        # seed with the support atom toward w (or e1 for w = 0)
        for d in range(n):
            c[d] = w[d]
        sval = 0.0
        for d in range(n):
            sval += c[d] * c[d]
        if sval == 0.0:
            c[0] = 1.0
        pid[0] = _support_point(D, P, c, n, S, &sval)
        lam[0] = 1.0
        k = 1
    for it in range(max_iter):
        for d in range(n):
            p[d] = 0.0
        for a in range(k):
            for d in range(n):
                p[d] += lam[a] * S[a * MAXN + d]
        dist = 0.0
        for d in range(n):
            c[d] = w[d] - p[d]
            dist += c[d] * c[d]
        dist = sqrt(dist)
        if dist <= dist_tol:
            res.dist = 0.0
            res.lower = 0.0
            k_io[0] = k
            res.natoms = k
            return res
        pid[k] = _support_point(D, P, c, n, spt, &hval)
        cw = 0.0
        for d in range(n):
            cw += c[d] * w[d]
        lower = (cw - hval) / dist
        if lower > best_lower:
            best_lower = lower
        gap = hval - (cw - dist * dist)
        if gap <= gap_tol:
            res.dist = dist
            res.lower = best_lower if best_lower > 0.0 else 0.0
            res.has_dir = True
            for d in range(n):
                cdir[d] = c[d]
            k_io[0] = k
            res.natoms = k
            return res
        # append the support atom and restore feasible weights
        if k < MAXA - 1:
            for d in range(n):
                S[k * MAXN + d] = spt[d]
            lam[k] = 0.0
            k += 1
        for minor in range(3 * (n + 2)):
            okflag = _affine_min_norm(S, k, n, w, alpha)
            if not okflag:
                drop = 0
                drop_val = lam[0]
                for a in range(1, k - 1):
                    if lam[a] < drop_val:
                        drop_val = lam[a]
                        drop = a
                for a in range(drop, k - 1):
                    for d in range(n):
                        S[a * MAXN + d] = S[(a + 1) * MAXN + d]
                    lam[a] = lam[a + 1]
                    pid[a] = pid[a + 1]
                k -= 1
                continue
            theta = 1.0
            okflag = True
            for a in range(k):
                if alpha[a] <= 1e-12:
                    okflag = False
            if okflag:
                for a in range(k):
                    lam[a] = alpha[a]
                break
            for a in range(k):
                if alpha[a] <= 1e-12 and lam[a] > alpha[a]:
                    if lam[a] / (lam[a] - alpha[a]) < theta:
                        theta = lam[a] / (lam[a] - alpha[a])
            for a in range(k):
                lam[a] = (1.0 - theta) * lam[a] + theta * alpha[a]
            keep = 0
            for a in range(k):
                if lam[a] > 1e-12:
                    if keep != a:
                        for d in range(n):
                            S[keep * MAXN + d] = S[a * MAXN + d]
                        lam[keep] = lam[a]
                        pid[keep] = pid[a]
                    keep += 1
            if keep == 0:
                for d in range(n):
                    S[0 * MAXN + d] = S[(k - 1) * MAXN + d]
                lam[0] = 1.0
                pid[0] = pid[k - 1]
                keep = 1
            k = keep
            tot = 0.0
            for a in range(k):
                tot += lam[a]
            for a in range(k):
                lam[a] /= tot
    # iteration cap: return the current (valid) bounds
    for d in range(n):
        p[d] = 0.0
    for a in range(k):
        for d in range(n):
            p[d] += lam[a] * S[a * MAXN + d]
    dist = 0.0
    for d in range(n):
        c[d] = w[d] - p[d]
        dist += c[d] * c[d]
    dist = sqrt(dist)
    res.dist = dist
    res.lower = best_lower if best_lower > 0.0 else 0.0
    res.has_dir = dist > 0.0
    for d in range(n):
        cdir[d] = c[d]
    k_io[0] = k
    res.natoms = k
    return res


def hull_distance(prepared, w, state=None, max_iter=200, gap_tol=1e-12,
                  dist_tol=1e-14):
    """Python-visible distance query mirroring the pure twin's signature."""
    cdef double[:, ::1] D = prepared[0]
    cdef double[:, ::1] P = prepared[1]
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0]
    cdef double S[MAXA * MAXN]
    cdef double lam[MAXA]
    cdef Py_ssize_t pid[MAXA]
    cdef double cdir[MAXN]
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t a, d
    if state:
        for a in range(min(len(state), MAXA - 2)):
            spid, spt, slam = state[a]
            pid[k] = spid
            for d in range(n):
                S[k * MAXN + d] = spt[d]
            lam[k] = 1.0
            k += 1
        for a in range(k):
            lam[a] = 1.0 / k
    cdef DistResult res = _distance(D, P, &wv[0], n, S, pid, lam, &k,
                                    cdir, max_iter, gap_tol, dist_tol)
    out_state = [(int(pid[a]), [S[a * MAXN + d] for d in range(n)], float(lam[a]))
                 for a in range(k)]
    direction = None
    if res.has_dir:
        direction = [cdir[d] for d in range(n)]
    return float(res.dist), float(res.lower), direction, out_state


def hull_gauge(prepared, x, double rel_tol=1e-9):
    """Certified hull gauge; same three-phase strategy as the pure twin."""
    cdef double[:, ::1] D = prepared[0]
    cdef double[:, ::1] P = prepared[1]
    cdef double r2 = prepared[2]
    cdef double rho = prepared[3]
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    if n > MAXN:
        from . import pykernels
        return pykernels.hull_gauge(
            (_dlist(prepared), _plist(prepared), r2, rho), x, rel_tol)
    return _gauge_impl(D, P, r2, rho, &xv[0], n, rel_tol, prepared, x)


cdef double _gauge_impl(double[:, ::1] D, double[:, ::1] P, double r2, double rho,
                        double* xv, Py_ssize_t n, double rel_tol,
                        object prepared, object xobj):
    cdef double x2 = 0.0
    cdef Py_ssize_t d, it, a
    for d in range(n):
        x2 += xv[d] * xv[d]
    x2 = sqrt(x2)
    if x2 == 0.0:
        return 0.0
    cdef double lo = x2 / r2
    cdef double hi = -1.0
    cdef double S[MAXA * MAXN]
    cdef double lam[MAXA]
    cdef Py_ssize_t pid[MAXA]
    cdef Py_ssize_t k = 0
    cdef double cdir[MAXN]
    cdef double q[MAXN]
    cdef double t = lo
    cdef double cand, cert, hval
    cdef bint have_dir = False
    cdef DistResult res

    for it in range(3):
        for d in range(n):
            q[d] = xv[d] / t
        res = _distance(D, P, q, n, S, pid, lam, &k, cdir, 60,
                        1e-7 * (lo if lo > 1.0 else 1.0), 1e-14)
        cand = t * (1.0 + res.dist / rho)
        if hi < 0.0 or cand < hi:
            hi = cand
        if res.has_dir:
            have_dir = True
            hval = _support_value(D, P, cdir, n)
            if hval > 0.0:
                cert = 0.0
                for d in range(n):
                    cert += cdir[d] * xv[d]
                cert /= hval
                if cert > lo:
                    lo = cert
        if hi - lo <= rel_tol * hi:
            return hi
        t = lo if t < lo else 0.5 * (lo + hi)

    # Newton polish on the active set
    cdef double plo, phi
    if _newton_polish(D, P, rho, xv, n, S, pid, lam, k, cdir, have_dir, &plo, &phi):
        if plo > lo:
            lo = plo
        if phi >= 0.0 and phi < hi:
            hi = phi
        if hi - lo <= rel_tol * hi:
            return hi

    for it in range(60):
        t = 0.5 * (lo + hi)
        for d in range(n):
            q[d] = xv[d] / t
        res = _distance(D, P, q, n, S, pid, lam, &k, cdir, 250, 1e-13, 1e-14)
        cand = t * (1.0 + res.dist / rho)
        if cand < hi:
            hi = cand
        if res.has_dir:
            have_dir = True
            hval = _support_value(D, P, cdir, n)
            if hval > 0.0:
                cert = 0.0
                for d in range(n):
                    cert += cdir[d] * xv[d]
                cert /= hval
                if cert > lo:
                    lo = cert
        if _newton_polish(D, P, rho, xv, n, S, pid, lam, k, cdir, have_dir, &plo, &phi):
            if plo > lo:
                lo = plo
            if phi >= 0.0 and phi < hi:
                hi = phi
        if hi - lo <= rel_tol * hi:
            return hi
    return hi


cdef bint _solve_dense(double* A, double* b, Py_ssize_t m) noexcept nogil:
    """In-place solve of the m x m system (stride MAXC); result in b."""
    cdef Py_ssize_t col, r, piv, d
    cdef double mx, inv, f, tmp
    for col in range(m):
        piv = col
        mx = fabs(A[col * MAXC + col])
        for r in range(col + 1, m):
            if fabs(A[r * MAXC + col]) > mx:
                mx = fabs(A[r * MAXC + col])
                piv = r
        if mx < 1e-14:
            return False
        if piv != col:
            for d in range(m):
                tmp = A[col * MAXC + d]
                A[col * MAXC + d] = A[piv * MAXC + d]
                A[piv * MAXC + d] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        inv = 1.0 / A[col * MAXC + col]
        for d in range(col, m):
            A[col * MAXC + d] *= inv
        b[col] *= inv
        for r in range(m):
            if r != col and A[r * MAXC + col] != 0.0:
                f = A[r * MAXC + col]
                for d in range(col, m):
                    A[r * MAXC + d] -= f * A[col * MAXC + d]
                b[r] -= f * b[col]
    return True


cdef bint _newton_polish(double[:, ::1] D, double[:, ::1] P, double rho,
                         double* xv, Py_ssize_t n, double* S, Py_ssize_t* pid,
                         double* lam, Py_ssize_t k, double* f_init,
                         bint has_init, double* lo_out,
                         double* hi_out) noexcept nogil:
    """Active-set KKT Newton for max{<f, x> : active piece supports = 1};
    writes certified bounds into lo_out / hi_out on success.  A negative
    primal weight drops its piece and retries, as in nonnegative least
    squares."""
    cdef Py_ssize_t adisk[6]
    cdef Py_ssize_t apt[6]
    cdef Py_ssize_t nd = 0, np_ = 0
    cdef Py_ssize_t a, b, d, t, it, m, i, j, attempt, worst_kind, worst_idx
    cdef bint seen, found, converged
    for a in range(k):
        if lam[a] <= 1e-10:
            continue
        if pid[a] < D.shape[0]:
            seen = False
            for b in range(nd):
                if adisk[b] == pid[a]:
                    seen = True
            if not seen and nd < 6:
                adisk[nd] = pid[a]
                nd += 1
        else:
            seen = False
            for b in range(np_):
                if apt[b] == pid[a] - D.shape[0]:
                    seen = True
            if not seen and np_ < 6:
                apt[np_] = pid[a] - D.shape[0]
                np_ += 1

    cdef double f[MAXN]
    cdef double w[MAXC]
    cdef double g[6]
    cdef double qd[6][MAXN]
    cdef double Bmat[MAXN][MAXC]
    cdef double NT[MAXC][MAXC]
    cdef double rhs[MAXC]
    cdef double res[MAXC]
    cdef double KKT[MAXC][MAXC]
    cdef double Kb[MAXC]
    cdef double Hrow[MAXN][MAXN]
    cdef double x2 = 0.0, acc, ra, rb, gv, mxres, wv
    cdef double NTcopy[MAXC * MAXC]
    cdef double Kflat[MAXC * MAXC]
    cdef double best_lo = 0.0, best_hi = -1.0
    cdef double hval, lower, total, err
    cdef double rec[MAXN]

    for d in range(n):
        x2 += xv[d] * xv[d]
    x2 = sqrt(x2)
    if x2 == 0.0:
        return False
    found = False

    cdef double hseed
    for attempt in range(4):
        m = nd + np_
        if m == 0 or m > n:
            break
        if has_init:
            hseed = _support_value(D, P, f_init, n)
            if hseed > 0.0:
                for d in range(n):
                    f[d] = f_init[d] / hseed
            else:
                for d in range(n):
                    f[d] = xv[d] / x2
        else:
            for d in range(n):
                f[d] = xv[d] / x2
        converged = False
        for it in range(60):
            for d in range(n):
                for t in range(m):
                    Bmat[d][t] = 0.0
            for t in range(np_):
                for d in range(n):
                    Bmat[d][t] = P[apt[t], d]
            for t in range(nd):
                i = <Py_ssize_t> D[adisk[t], 0]
                j = <Py_ssize_t> D[adisk[t], 1]
                ra = D[adisk[t], 2]
                rb = D[adisk[t], 3]
                gv = hypot(ra * f[i], rb * f[j])
                if gv <= 1e-14:
                    break
                g[t] = gv
                for d in range(n):
                    qd[t][d] = 0.0
                qd[t][i] = ra * ra * f[i] / gv
                qd[t][j] = rb * rb * f[j] / gv
                for d in range(n):
                    Bmat[d][np_ + t] = qd[t][d]
            else:
                # least squares via normal equations
                for a in range(m):
                    for b in range(m):
                        acc = 0.0
                        for d in range(n):
                            acc += Bmat[d][a] * Bmat[d][b]
                        NT[a][b] = acc
                    acc = 0.0
                    for d in range(n):
                        acc += Bmat[d][a] * xv[d]
                    rhs[a] = acc
                for a in range(m):
                    for b in range(m):
                        NTcopy[a * MAXC + b] = NT[a][b]
                    w[a] = rhs[a]
                if not _solve_dense(NTcopy, w, m):
                    break
                mxres = 0.0
                for d in range(n):
                    acc = xv[d]
                    for a in range(m):
                        acc -= Bmat[d][a] * w[a]
                    res[d] = acc
                    if fabs(acc) > mxres:
                        mxres = fabs(acc)
                for t in range(np_):
                    acc = 1.0
                    for d in range(n):
                        acc -= P[apt[t], d] * f[d]
                    res[n + t] = acc
                    if fabs(acc) > mxres:
                        mxres = fabs(acc)
                for t in range(nd):
                    acc = 1.0 - g[t]
                    res[n + np_ + t] = acc
                    if fabs(acc) > mxres:
                        mxres = fabs(acc)
                if mxres <= 1e-13:
                    converged = True
                    break
                for a in range(n + m):
                    for b in range(n + m):
                        KKT[a][b] = 0.0
                for t in range(nd):
                    i = <Py_ssize_t> D[adisk[t], 0]
                    j = <Py_ssize_t> D[adisk[t], 1]
                    ra = D[adisk[t], 2]
                    rb = D[adisk[t], 3]
                    gv = g[t]
                    for a in range(n):
                        for b in range(n):
                            Hrow[a][b] = 0.0
                    Hrow[i][i] = ra * ra / gv - qd[t][i] * qd[t][i] / gv
                    Hrow[i][j] = -qd[t][i] * qd[t][j] / gv
                    Hrow[j][i] = -qd[t][j] * qd[t][i] / gv
                    Hrow[j][j] = rb * rb / gv - qd[t][j] * qd[t][j] / gv
                    for a in range(n):
                        for b in range(n):
                            KKT[a][b] -= w[np_ + t] * Hrow[a][b]
                for d in range(n):
                    for a in range(m):
                        KKT[d][n + a] = -Bmat[d][a]
                for t in range(np_):
                    for d in range(n):
                        KKT[n + t][d] = -P[apt[t], d]
                for t in range(nd):
                    for d in range(n):
                        KKT[n + np_ + t][d] = -qd[t][d]
                for a in range(n + m):
                    for b in range(n + m):
                        Kflat[a * MAXC + b] = KKT[a][b]
                    Kb[a] = -res[a]
                if not _solve_dense(Kflat, Kb, n + m):
                    break
                for d in range(n):
                    f[d] += Kb[d]
                continue
            break
        if not converged:
            break
        # certified lower bound from the polished dual direction
        hval = _support_value(D, P, f, n)
        lower = 0.0
        if hval > 0.0:
            acc = 0.0
            for d in range(n):
                acc += f[d] * xv[d]
            lower = acc / hval
        if lower > best_lo:
            best_lo = lower
            found = True
        # worst negative weight, if any, names the piece to drop
        worst_kind = -1
        worst_idx = -1
        acc = -1e-11
        for t in range(np_):
            if w[t] < acc:
                acc = w[t]
                worst_kind = 0
                worst_idx = t
        for t in range(nd):
            if w[np_ + t] < acc:
                acc = w[np_ + t]
                worst_kind = 1
                worst_idx = t
        if worst_kind >= 0:
            if worst_kind == 0:
                for t in range(worst_idx, np_ - 1):
                    apt[t] = apt[t + 1]
                np_ -= 1
            else:
                for t in range(worst_idx, nd - 1):
                    adisk[t] = adisk[t + 1]
                nd -= 1
            continue
        # all weights admissible: certified upper bound via the inradius
        total = 0.0
        for d in range(n):
            rec[d] = 0.0
        for t in range(np_):
            wv = w[t] if w[t] > 0.0 else 0.0
            total += wv
            for d in range(n):
                rec[d] += wv * P[apt[t], d]
        for t in range(nd):
            wv = w[np_ + t] if w[np_ + t] > 0.0 else 0.0
            total += wv
            i = <Py_ssize_t> D[adisk[t], 0]
            j = <Py_ssize_t> D[adisk[t], 1]
            ra = D[adisk[t], 2]
            rb = D[adisk[t], 3]
            rec[i] += wv * (ra * (ra * f[i] / g[t]))
            rec[j] += wv * (rb * (rb * f[j] / g[t]))
        if total > 0.0:
            err = 0.0
            for d in range(n):
                err += (xv[d] - rec[d]) * (xv[d] - rec[d])
            err = sqrt(err)
            acc = total * (1.0 + err / (rho * total))
            if best_hi < 0.0 or acc < best_hi:
                best_hi = acc
            found = True
        break
    if not found:
        return False
    lo_out[0] = best_lo
    hi_out[0] = best_hi
    return True


def _dlist(prepared):
    return [(int(r[0]), int(r[1]), float(r[2]), float(r[3])) for r in np.asarray(prepared[0])]


def _plist(prepared):
    return [tuple(map(float, p)) for p in np.asarray(prepared[1])]


def hull_gauge_batch(prepared, X, double rel_tol=1e-9):
    Xa = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty(Xa.shape[0])
    cdef Py_ssize_t i
    for i in range(Xa.shape[0]):
        out[i] = hull_gauge(prepared, Xa[i], rel_tol)
    return out
