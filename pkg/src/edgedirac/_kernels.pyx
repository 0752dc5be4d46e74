# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for symmetric tridiagonal eigenproblems.

Sturm-sequence bisection for eigenvalues by index, and inverse iteration
with an LDL^T solve for eigenvectors.  The pure-Python module _kernels_py
implements the same arithmetic in the same order, so both backends return
bit-identical results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

cdef unsigned long long LCG_MULT = 6364136223846793005ULL
cdef unsigned long long LCG_INC = 1442695040888963407ULL


cdef double _pivmin(double[::1] e) nogil:
    cdef double m = 1.0
    cdef Py_ssize_t i
    for i in range(e.shape[0]):
        if e[i] * e[i] > m:
            m = e[i] * e[i]
    return 1e-300 * m


cdef long _count(double[::1] d, double[::1] e, double x, double pivmin) nogil:
    """Number of eigenvalues strictly below x (negative pivots of LDL^T)."""
    cdef long cnt = 0
    cdef double q = d[0] - x
    cdef Py_ssize_t i
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        cnt += 1
    for i in range(1, d.shape[0]):
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            cnt += 1
    return cnt


def sturm_count(double[::1] d, double[::1] e, double x):
    return _count(d, e, x, _pivmin(e))


def gershgorin(double[::1] d, double[::1] e):
    """Interval [lo, hi] containing all eigenvalues."""
    cdef double lo = d[0], hi = d[0], r
    cdef Py_ssize_t i, n = d.shape[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(e[i - 1])
        if i < n - 1:
            r += fabs(e[i])
        if d[i] - r < lo:
            lo = d[i] - r
        if d[i] + r > hi:
            hi = d[i] + r
    return lo, hi


cdef double _bisect_index(double[::1] d, double[::1] e, long k, double tol_rel,
                          double lo, double hi, double pivmin) nogil:
    """Smallest x-interval [lo, hi] with count(lo) <= k < count(hi); midpoint."""
    cdef double mid, width, scale
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        width = hi - lo
        scale = 1.0
        if fabs(lo) > scale:
            scale = fabs(lo)
        if fabs(hi) > scale:
            scale = fabs(hi)
        if width <= tol_rel * scale:
            break
        if _count(d, e, mid, pivmin) <= k:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_eigenvalues(double[::1] d, double[::1] e, long k0, long k1,
                       double tol_rel):
    """Eigenvalues of index k0..k1 (0-based, ascending) by Sturm bisection."""
    cdef double pivmin = _pivmin(e)
    cdef double glo, ghi
    glo, ghi = gershgorin(d, e)
    # widen so strict count brackets hold at the end points
    cdef double pad = 1e-12 * (fabs(glo) + fabs(ghi)) + 1e-300
    glo -= pad
    ghi += pad
    out = np.empty(k1 - k0 + 1, dtype=np.float64)
    cdef double[::1] ov = out
    cdef long k
    with nogil:
        for k in range(k0, k1 + 1):
            ov[k - k0] = _bisect_index(d, e, k, tol_rel, glo, ghi, pivmin)
    return out


def bisect_one_hinted(double[::1] d, double[::1] e, long k, double tol_rel,
                      double lo, double hi):
    """Like bisect_eigenvalues for a single index, trying a caller bracket.

    Falls back to the Gershgorin bracket when the hint does not isolate k.
    """
    cdef double pivmin = _pivmin(e)
    cdef double glo, ghi, pad
    if lo < hi and _count(d, e, lo, pivmin) <= k < _count(d, e, hi, pivmin):
        return _bisect_index(d, e, k, tol_rel, lo, hi, pivmin)
    glo, ghi = gershgorin(d, e)
    pad = 1e-12 * (fabs(glo) + fabs(ghi)) + 1e-300
    return _bisect_index(d, e, k, tol_rel, glo - pad, ghi + pad, pivmin)


cdef int _solve_ldlt(double[::1] d, double[::1] e, double shift,
                     double[::1] rhs, double[::1] sub, double[::1] piv) nogil:
    """Solve (T - shift I) x = rhs in place via LDL^T. Returns 0, or 1 when
    an exactly singular pivot was met (caller perturbs the shift)."""
    cdef Py_ssize_t i, n = d.shape[0]
    cdef double l
    piv[0] = d[0] - shift
    if piv[0] == 0.0:
        return 1
    for i in range(1, n):
        l = e[i - 1] / piv[i - 1]
        sub[i - 1] = l
        piv[i] = (d[i] - shift) - l * e[i - 1]
        if piv[i] == 0.0:
            return 1
    # forward substitution (L z = rhs), rhs overwritten
    for i in range(1, n):
        rhs[i] -= sub[i - 1] * rhs[i - 1]
    for i in range(n):
        rhs[i] /= piv[i]
    for i in range(n - 2, -1, -1):
        rhs[i] -= sub[i] * rhs[i + 1]
    return 0


def inverse_iteration(double[::1] d, double[::1] e, double nu,
                      long max_iter, double res_tol):
    """Unit eigenvector for the eigenvalue nearest nu.

    Deterministic LCG start vector; stops when ||T v - nu v||_2 <= res_tol.
    Returns (vector, residual, iterations); iterations < 0 flags
    non-convergence (caller raises).
    """
    cdef Py_ssize_t i, j, n = d.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] v = out
    work = np.empty(3 * n, dtype=np.float64)
    cdef double[::1] sub = work[:n]
    cdef double[::1] piv = work[n:2 * n]
    cdef double[::1] tv = work[2 * n:]
    cdef unsigned long long state = 0x853c49e6748fea9bULL
    cdef double nrm, resid = 0.0, shift = nu, scale, t
    cdef long it, done = -1
    with nogil:
        for i in range(n):
            state = state * LCG_MULT + LCG_INC
            v[i] = <double> (state >> 11) / 9007199254740992.0 - 0.5
        scale = 0.0
        for i in range(n):
            t = fabs(d[i])
            if i > 0:
                t += fabs(e[i - 1])
            if i < n - 1:
                t += fabs(e[i])
            if t > scale:
                scale = t
        for it in range(max_iter):
            while _solve_ldlt(d, e, shift, v, sub, piv):
                shift += 1e-12 * (1.0 if scale < 1.0 else scale)
            nrm = 0.0
            for i in range(n):
                nrm += v[i] * v[i]
            nrm = sqrt(nrm)
            for i in range(n):
                v[i] /= nrm
            for i in range(n):
                tv[i] = d[i] * v[i] - nu * v[i]
                if i > 0:
                    tv[i] += e[i - 1] * v[i - 1]
                if i < n - 1:
                    tv[i] += e[i] * v[i + 1]
            resid = 0.0
            for i in range(n):
                resid += tv[i] * tv[i]
            resid = sqrt(resid)
            if resid <= res_tol:
                done = it + 1
                break
        # sign convention: first component above noise level is positive
        nrm = 0.0
        for i in range(n):
            if fabs(v[i]) > nrm:
                nrm = fabs(v[i])
        for i in range(n):
            if fabs(v[i]) > 1e-12 * nrm:
                if v[i] < 0:
                    for j in range(n):
                        v[j] = -v[j]
                break
    return out, resid, done
