"""Staggered-grid discretization of the two-component fiber Dirac operator.

This is the independent cross-check oracle for the fixed-point dispersion
path.  The first spinor component lives on integer nodes 0..N, the second
on half nodes 1/2..N-1/2; first differences between the two grids are
second-order accurate and exactly skew-pairable, and multiplication by
(xi + b x) is sampled at half nodes and averaged, so the off-diagonal
blocks are exact discrete adjoints of each other.  In the interleaved
ordering (psi1_0, psi2_1/2, psi1_1, ...) the whole operator is a symmetric
tridiagonal matrix whose only diagonal entry is the boundary term
gamma * psi1(0)^2 (weak enforcement of psi2(0) = gamma psi1(0)).

Truncation imposes psi2(L) = 0 while leaving psi1(L) free.  This kills the
spurious near-zero edge mode that a psi1(L) = 0 truncation would admit
(the growing solution of d_xi psi2 = 0 localized at the artificial edge)
and keeps the genuine zero mode of the gamma = 0 boundary condition, where
the matrix has exactly zero diagonal and odd dimension.

For b < 0 the assembled matrix is the negated canonical one: with the
grids of the two components swapped, charge conjugation is exact at the
discrete level, so the b < 0 spectrum is the negated canonical spectrum
with gamma inverted and xi reflected, to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grids import Grid
from .params import FiberParams, canonicalize
from .robin import EigenPair
from .tridiag import SymTridiag, eigenvalues_by_range, eigenvector, sturm_count


@dataclass(frozen=True)
class DiracMatrix:
    tridiag: SymTridiag
    fp: FiberParams  # requested parameters
    grid: Grid
    conjugated: bool  # True when assembled through the b < 0 map
    gamma_infinite: bool

    @property
    def dim(self) -> int:
        return self.tridiag.dim

    def to_dense(self) -> np.ndarray:
        return self.tridiag.to_dense()


@dataclass(frozen=True)
class Spinor:
    psi1: np.ndarray  # integer nodes 0..N
    psi2: np.ndarray  # half nodes 1/2..N-1/2
    lam: float
    params: FiberParams
    grid: Grid

    def boundary_psi2(self) -> float:
        """psi2(0) by linear extrapolation from the first two half nodes."""
        return float(1.5 * self.psi2[0] - 0.5 * self.psi2[1])

    def norm(self) -> float:
        w1 = _psi1_weights(self.grid)
        return math.sqrt(float(np.sum(w1 * self.psi1 ** 2))
                         + self.grid.h * float(np.sum(self.psi2 ** 2)))


def _psi1_weights(g: Grid) -> np.ndarray:
    w = np.full(g.N + 1, g.h)
    w[0] = g.h / 2
    w[g.N] = g.h / 2
    return w


def _assemble_canonical(b: float, gamma: float, xi: float, g: Grid) -> SymTridiag:
    h = g.h
    m = xi + b * g.half_nodes()
    w1 = _psi1_weights(g)
    cl = -1.0 + h * m / 2  # psi1_j     <-> psi2_{j+1/2}
    cr = 1.0 + h * m / 2  # psi2_{j+1/2} <-> psi1_{j+1}
    if math.isinf(gamma):
        # psi1_0 eliminated; ordering psi2_1/2, psi1_1, psi2_3/2, ..., psi1_N
        d = np.zeros(2 * g.N)
        e = np.empty(2 * g.N - 1)
        e[0::2] = cr / np.sqrt(h * w1[1:])
        e[1::2] = cl[1:] / np.sqrt(w1[1:-1] * h)
        return SymTridiag(d, e)
    d = np.zeros(2 * g.N + 1)
    d[0] = gamma / w1[0]
    e = np.empty(2 * g.N)
    e[0::2] = cl / np.sqrt(w1[:-1] * h)
    e[1::2] = cr / np.sqrt(h * w1[1:])
    return SymTridiag(d, e)


def assemble_dirac(fp: FiberParams, g: Grid) -> DiracMatrix:
    """Symmetric tridiagonal representation of the fiber Dirac operator."""
    if fp.b > 0:
        return DiracMatrix(_assemble_canonical(fp.b, fp.gamma, fp.xi, g), fp, g,
                           conjugated=False, gamma_infinite=math.isinf(fp.gamma))
    can, _ = canonicalize(fp)
    T = _assemble_canonical(can.b, can.gamma, can.xi, g)
    return DiracMatrix(SymTridiag(-T.diag, -T.off), fp, g,
                       conjugated=True, gamma_infinite=math.isinf(can.gamma))


def dirac_spectrum_window(fp: FiberParams, g: Grid, k: int) -> np.ndarray:
    """The k eigenvalues nearest zero, sorted ascending (signed)."""
    if k < 1:
        raise DomainError(f"need k >= 1 eigenvalues, got {k}")
    D = assemble_dirac(fp, g)
    T = D.tridiag
    below = sturm_count(T, 0.0)
    k0 = max(0, below - k)
    k1 = min(T.dim - 1, below + k - 1)
    vals = eigenvalues_by_range(T, k0, k1)
    order = np.argsort(np.abs(vals), kind="stable")
    return np.sort(vals[order[:k]])


def _split_interleaved(z: np.ndarray, g: Grid, gamma_infinite: bool):
    """Undo the interleaving and the W^(1/2) scaling of an eigenvector."""
    w1 = _psi1_weights(g)
    psi1 = np.zeros(g.N + 1)
    if gamma_infinite:
        psi1[1:] = z[1::2] / np.sqrt(w1[1:])
        psi2 = z[0::2] / math.sqrt(g.h)
    else:
        psi1 = z[0::2] / np.sqrt(w1)
        psi2 = z[1::2] / math.sqrt(g.h)
    return psi1, psi2


def dirac_eigenspinor(fp: FiberParams, g: Grid, target: float) -> Spinor:
    """Normalized spinor of the eigenvalue nearest target (b > 0 only)."""
    if fp.b <= 0:
        raise DomainError("spinor extraction is defined on the canonical side b > 0")
    D = assemble_dirac(fp, g)
    T = D.tridiag
    below = sturm_count(T, target)
    k0 = max(0, below - 1)
    k1 = min(T.dim - 1, below)
    vals = eigenvalues_by_range(T, k0, k1)
    lam = float(vals[np.argmin(np.abs(vals - target))])
    z = eigenvector(T, lam)
    psi1, psi2 = _split_interleaved(z, g, D.gamma_infinite)
    return Spinor(psi1, psi2, lam, fp, g)


def staggered_d_dagger(u: np.ndarray, b: float, xi: float, g: Grid) -> np.ndarray:
    """Discrete d^dagger = xi + d/dx + b x, integer nodes to half nodes."""
    m = xi + b * g.half_nodes()
    return (u[1:] - u[:-1]) / g.h + m * (u[:-1] + u[1:]) / 2


def reconstruct_spinor(e: EigenPair, lam: float, fp: FiberParams, g: Grid) -> Spinor:
    """Spinor (u, d^dagger u / lambda) from a Robin eigenvector u.

    The map is the eigenfunction isomorphism between the Robin problem at
    alpha = gamma * lambda and the Dirac eigenspace at lambda > 0.
    """
    if lam <= 0:
        raise DomainError(f"spinor reconstruction needs lambda > 0, got {lam}")
    if fp.gamma * lam <= 0:
        raise DomainError("spinor reconstruction needs gamma * lambda > 0")
    psi1 = np.zeros(g.N + 1)
    psi1[: g.N] = e.samples
    psi2 = staggered_d_dagger(psi1, fp.b, fp.xi, g) / lam
    s = Spinor(psi1, psi2, lam, fp, g)
    nrm = s.norm()
    return Spinor(psi1 / nrm, psi2 / nrm, lam, fp, g)


def dirac_residual(s: Spinor, g: Grid) -> float:
    """|| (D - lambda) Psi ||_2 in the scaled coordinates of assemble_dirac."""
    D = assemble_dirac(s.params, g)
    w1 = _psi1_weights(g)
    if D.gamma_infinite:
        z = np.empty(2 * g.N)
        z[0::2] = s.psi2 * math.sqrt(g.h)
        z[1::2] = s.psi1[1:] * np.sqrt(w1[1:])
    else:
        z = np.empty(2 * g.N + 1)
        z[0::2] = s.psi1 * np.sqrt(w1)
        z[1::2] = s.psi2 * math.sqrt(g.h)
    r = D.tridiag.matvec(z) - s.lam * z
    return float(np.linalg.norm(r) / np.linalg.norm(z))


def feynman_hellmann_velocity(s: Spinor) -> float:
    """Curve slope lambda'(xi) = 2 <psi1, psi2> with psi1 averaged to half nodes."""
    g = s.grid
    pairing = s.psi2 * (s.psi1[:-1] + s.psi1[1:]) / 2
    return 2.0 * g.h * float(np.sum(pairing))
