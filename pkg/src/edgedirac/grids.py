"""Half-line grids.

The half-line [0, infinity) is truncated to [0, L] with N uniform
subintervals.  Node 0 carries the physical boundary condition; node N
carries the artificial Dirichlet truncation, which is harmless because all
targeted eigenfunctions decay like a Gaussian beyond the potential well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidGridError


@dataclass(frozen=True)
class Grid:
    L: float
    N: int

    @property
    def h(self) -> float:
        return self.L / self.N

    def nodes(self) -> np.ndarray:
        """x_j = j h for j = 0..N."""
        return np.arange(self.N + 1) * self.h

    def half_nodes(self) -> np.ndarray:
        """x_{j+1/2} = (j + 1/2) h for j = 0..N-1."""
        return (np.arange(self.N) + 0.5) * self.h

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.L, self.N * factor)


def make_grid(L: float, N: int) -> Grid:
    if not (L > 0):
        raise InvalidGridError(f"truncation length must be positive, got {L}")
    if N < 8:
        raise InvalidGridError(f"need at least 8 subintervals, got {N}")
    return Grid(float(L), int(N))


def auto_domain(b: float, xi_min: float, n_max: int) -> Grid:
    """Grid large and fine enough for branches up to n_max at momenta down
    to xi_min.

    The harmonic well sits at x* = max(0, -xi/|b|) and eigenfunctions decay
    on the scale 1/sqrt(|b|), so L = x* + 8/sqrt(|b|) + 2 n_max/sqrt(|b|)
    leaves the truncation error far below the discretization error.  The
    spacing is capped at min(0.01, 0.1/sqrt(|b|)).
    """
    if b == 0:
        raise DomainError("field strength b must be nonzero")
    n_max = max(1, int(n_max))
    sb = math.sqrt(abs(b))
    x_star = max(0.0, -xi_min / abs(b))
    L = x_star + 8.0 / sb + 2.0 * n_max / sb
    h_target = min(0.01, 0.1 / sb)
    N = max(8, math.ceil(L / h_target))
    return Grid(L, N)
