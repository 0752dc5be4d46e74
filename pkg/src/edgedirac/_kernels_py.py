"""Pure-Python fallback for the compiled tridiagonal kernels.

Same algorithms and bracketing sequences as _kernels.pyx: eigenvalues are
bit-identical across backends (bisection decisions depend only on Sturm
counts, whose per-shift arithmetic matches the compiled loop exactly);
eigenvectors agree to rounding since the normalization sums are reduced in
a different order.  Used when the extension module is unavailable or
explicitly disabled via EDGEDIRAC_FORCE_PYTHON=1.
"""

from __future__ import annotations

import math

import numpy as np

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


def _pivmin(e: np.ndarray) -> float:
    m = 1.0
    if e.size:
        m = max(m, float(np.max(e * e)))
    return 1e-300 * m


def sturm_count(d, e, x):
    """Number of eigenvalues strictly below x (negative pivots of LDL^T)."""
    return int(_count_multi(np.asarray(d), np.asarray(e),
                            np.array([x]), _pivmin(np.asarray(e)))[0])


def _count_multi(d, e, xs, pivmin):
    """Sturm counts for a batch of shifts; lanes evolve independently."""
    q = d[0] - xs
    q[np.abs(q) < pivmin] = -pivmin
    cnt = (q < 0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = (d[i] - xs) - e[i - 1] * e[i - 1] / q
        q[np.abs(q) < pivmin] = -pivmin
        cnt += q < 0
    return cnt


def gershgorin(d, e):
    """Interval [lo, hi] containing all eigenvalues."""
    d = np.asarray(d)
    e = np.asarray(e)
    r = np.zeros_like(d)
    if e.size:
        r[:-1] += np.abs(e)
        r[1:] += np.abs(e)
    return float(np.min(d - r)), float(np.max(d + r))


def bisect_eigenvalues(d, e, k0, k1, tol_rel):
    """Eigenvalues of index k0..k1 (0-based, ascending) by Sturm bisection.

    All requested indices are bisected in parallel lanes; each lane follows
    the same bracket-update sequence as the scalar compiled loop.
    """
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    pivmin = _pivmin(e)
    glo, ghi = gershgorin(d, e)
    pad = 1e-12 * (abs(glo) + abs(ghi)) + 1e-300
    ks = np.arange(k0, k1 + 1)
    lo = np.full(ks.shape, glo - pad)
    hi = np.full(ks.shape, ghi + pad)
    active = np.ones(ks.shape, dtype=bool)
    while np.any(active):
        mid = 0.5 * (lo + hi)
        stuck = (mid == lo) | (mid == hi)
        scale = np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
        done = (hi - lo) <= tol_rel * scale
        active &= ~(stuck | done)
        if not np.any(active):
            break
        below = np.zeros(ks.shape, dtype=bool)
        below[active] = _count_multi(d, e, mid[active], pivmin) <= ks[active]
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    return 0.5 * (lo + hi)


def bisect_one_hinted(d, e, k, tol_rel, lo, hi):
    """Single-index bisection, preferring a caller-supplied bracket."""
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    pivmin = _pivmin(e)
    if not (lo < hi
            and int(_count_multi(d, e, np.array([lo]), pivmin)[0]) <= k
            < int(_count_multi(d, e, np.array([hi]), pivmin)[0])):
        glo, ghi = gershgorin(d, e)
        pad = 1e-12 * (abs(glo) + abs(ghi)) + 1e-300
        lo, hi = glo - pad, ghi + pad
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if hi - lo <= tol_rel * max(1.0, abs(lo), abs(hi)):
            break
        if int(_count_multi(d, e, np.array([mid]), pivmin)[0]) <= k:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _solve_ldlt(d, e, shift, rhs):
    """Solve (T - shift I) x = rhs via LDL^T; None when exactly singular."""
    n = d.shape[0]
    piv = np.empty(n)
    sub = np.empty(max(n - 1, 0))
    piv[0] = d[0] - shift
    if piv[0] == 0.0:
        return None
    for i in range(1, n):
        l = e[i - 1] / piv[i - 1]
        sub[i - 1] = l
        piv[i] = (d[i] - shift) - l * e[i - 1]
        if piv[i] == 0.0:
            return None
    x = rhs.copy()
    for i in range(1, n):
        x[i] -= sub[i - 1] * x[i - 1]
    x /= piv
    for i in range(n - 2, -1, -1):
        x[i] -= sub[i] * x[i + 1]
    return x


def inverse_iteration(d, e, nu, max_iter, res_tol):
    """Unit eigenvector for the eigenvalue nearest nu; see compiled twin."""
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    n = d.shape[0]
    state = 0x853C49E6748FEA9B
    v = np.empty(n)
    for i in range(n):
        state = (state * _LCG_MULT + _LCG_INC) & _LCG_MASK
        v[i] = (state >> 11) / 9007199254740992.0 - 0.5
    r = np.zeros(n)
    if e.size:
        r[:-1] += np.abs(e)
        r[1:] += np.abs(e)
    scale = float(np.max(np.abs(d) + r))
    shift = nu
    resid = math.inf
    done = -1
    for it in range(max_iter):
        while True:
            y = _solve_ldlt(d, e, shift, v)
            if y is not None:
                break
            shift += 1e-12 * max(1.0, scale)
        v = y / math.sqrt(float(y @ y))
        tv = d * v - nu * v
        if e.size:
            tv[1:] += e * v[:-1]
            tv[:-1] += e * v[1:]
        resid = math.sqrt(float(tv @ tv))
        if resid <= res_tol:
            done = it + 1
            break
    top = float(np.max(np.abs(v)))
    for i in range(n):
        if abs(v[i]) > 1e-12 * top:
            if v[i] < 0:
                v = -v
            break
    return v, resid, done
