"""Symmetric tridiagonal eigensolver.

Eigenvalues by Sturm-count bisection (robust, derivative-free, isolates any
index k between Gershgorin bounds), eigenvectors by inverse iteration on
the LDL^T factorization.  The hot loops live in a compiled extension with a
pure-Python twin; the backend is chosen once at import, and results do not
depend on that choice beyond rounding of eigenvector normalization.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, MatrixSizeError

if os.environ.get("EDGEDIRAC_FORCE_PYTHON", "") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _kernels_py as _impl

        BACKEND = "python"

DEFAULT_TOL_EIG = 1e-10
DEFAULT_RESIDUAL_FACTOR = 1e-8
DEFAULT_MAX_ITER = 50


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix (diag of length m, off of m-1)."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=np.float64)
        e = np.ascontiguousarray(self.off, dtype=np.float64)
        if e.shape[0] != max(d.shape[0] - 1, 0):
            raise MatrixSizeError(
                f"off-diagonal length {e.shape[0]} does not match dimension {d.shape[0]}")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "off", e)

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        if self.off.size:
            out[1:] += self.off * v[:-1]
            out[:-1] += self.off * v[1:]
        return out

    def norm_inf(self) -> float:
        r = np.zeros_like(self.diag)
        if self.off.size:
            r[:-1] += np.abs(self.off)
            r[1:] += np.abs(self.off)
        return float(np.max(np.abs(self.diag) + r))

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.off.size:
            a += np.diag(self.off, 1) + np.diag(self.off, -1)
        return a


def sturm_count(T: SymTridiag, x: float) -> int:
    """Number of eigenvalues of T strictly below x."""
    return int(_impl.sturm_count(T.diag, T.off, float(x)))


def lowest_eigenvalues(T: SymTridiag, k: int, tol_eig: float = DEFAULT_TOL_EIG) -> np.ndarray:
    """The k algebraically smallest eigenvalues, ascending.

    Each value is bracketed to width <= tol_eig * max(1, |nu|).
    """
    if k > T.dim:
        raise MatrixSizeError(f"requested {k} eigenvalues of a {T.dim}-dim matrix")
    if k <= 0:
        return np.empty(0)
    return np.asarray(_impl.bisect_eigenvalues(T.diag, T.off, 0, k - 1, tol_eig))


def eigenvalues_by_range(T: SymTridiag, k0: int, k1: int,
                         tol_eig: float = DEFAULT_TOL_EIG) -> np.ndarray:
    """Eigenvalues of index k0..k1 inclusive (0-based), ascending."""
    if not 0 <= k0 <= k1 < T.dim:
        raise MatrixSizeError(f"index range {k0}..{k1} out of bounds for dim {T.dim}")
    return np.asarray(_impl.bisect_eigenvalues(T.diag, T.off, k0, k1, tol_eig))


def eigenvalue_by_index(T: SymTridiag, k: int, tol_eig: float = DEFAULT_TOL_EIG,
                        bracket: tuple[float, float] | None = None) -> float:
    """The k-th smallest eigenvalue (0-based); an optional bracket hint is
    used when it isolates index k, which shortens warm-started solves."""
    if not 0 <= k < T.dim:
        raise MatrixSizeError(f"eigenvalue index {k} out of range for dim {T.dim}")
    if bracket is None:
        return float(_impl.bisect_eigenvalues(T.diag, T.off, k, k, tol_eig)[0])
    lo, hi = bracket
    return float(_impl.bisect_one_hinted(T.diag, T.off, k, tol_eig, lo, hi))


def eigenvector(T: SymTridiag, nu: float, max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Unit eigenvector for the eigenvalue nearest nu by inverse iteration.

    Residual target ||T v - nu v|| <= 1e-8 ||T||_inf; the sign is fixed so
    the first component above rounding noise is positive.
    """
    res_tol = DEFAULT_RESIDUAL_FACTOR * T.norm_inf()
    v, resid, iters = _impl.inverse_iteration(T.diag, T.off, float(nu), max_iter, res_tol)
    if iters < 0:
        raise ConvergenceError(
            f"inverse iteration stalled at residual {resid:.3e} (target {res_tol:.3e})")
    return np.asarray(v)


def eigenpair(T: SymTridiag, k: int, tol_eig: float = DEFAULT_TOL_EIG,
              bracket: tuple[float, float] | None = None) -> tuple[float, np.ndarray]:
    """Eigenvalue of index k together with its unit eigenvector."""
    nu = eigenvalue_by_index(T, k, tol_eig, bracket)
    return nu, eigenvector(T, nu)
