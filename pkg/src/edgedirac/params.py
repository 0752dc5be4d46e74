"""Fiber parameters, branch labels, and symmetry canonicalization.

Any (b, gamma, xi) with b != 0 reduces to b > 0 and gamma in [0, +inf]
through two exact spectral symmetries:

  * sigma_3 conjugation:  spectrum(b, gamma) = -spectrum(b, -gamma),
  * charge conjugation:   spectrum(b, gamma, xi) = -spectrum(-b, 1/gamma, -xi),

where gamma inversion swaps 0 and +inf.  The transform record kept next to
the canonical parameters maps canonical spectra back to the requested
problem exactly; canonicalization introduces no discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

GAMMA_ZERO_CLAMP = 1e-12  # |gamma| at or below: closed-form zigzag dispatch
GAMMA_INF_CLAMP = 1e12  # gamma at or above: treated as +inf


@dataclass(frozen=True)
class FiberParams:
    b: float
    gamma: float  # boundary parameter, math.inf allowed
    xi: float

    def __post_init__(self):
        if self.b == 0:
            raise DomainError("field strength b must be nonzero")
        if math.isnan(self.gamma):
            raise DomainError("boundary parameter gamma must not be NaN")

    @property
    def is_canonical(self) -> bool:
        return self.b > 0 and (self.gamma >= 0 or math.isinf(self.gamma))


@dataclass(frozen=True)
class Branch:
    sign: int  # +1 or -1
    n: int  # 1-based index within the sign class

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"branch sign must be +1 or -1, got {self.sign}")
        if self.n < 1:
            raise DomainError(f"branch index must be >= 1, got {self.n}")

    @property
    def label(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.n}"

    @property
    def j(self) -> int:
        """Signed curve index: lambda_j with j >= 1 positive, j <= -1 negative."""
        return self.sign * self.n


@dataclass(frozen=True)
class SymmetryTransform:
    negate_spectrum: bool = False
    reflect_xi: bool = False
    invert_gamma: bool = False
    flip_branch_sign: bool = False

    @property
    def is_identity(self) -> bool:
        return not (self.negate_spectrum or self.reflect_xi
                    or self.invert_gamma or self.flip_branch_sign)

    def map_branch(self, br: Branch) -> Branch:
        """Canonical branch whose curve realizes the requested branch."""
        return Branch(-br.sign, br.n) if self.flip_branch_sign else br

    def map_xi(self, xi):
        return -xi if self.reflect_xi else xi

    def map_value(self, lam):
        """Map a canonical signed eigenvalue back to the requested problem."""
        return -lam if self.negate_spectrum else lam

    def slope_factor(self) -> float:
        """Sign relating canonical and requested d lambda / d xi."""
        s = -1.0 if self.negate_spectrum else 1.0
        return -s if self.reflect_xi else s

    def as_dict(self) -> dict:
        return {
            "negate_spectrum": self.negate_spectrum,
            "reflect_xi": self.reflect_xi,
            "invert_gamma": self.invert_gamma,
            "flip_branch_sign": self.flip_branch_sign,
        }


def invert_gamma(gamma: float) -> float:
    """1/gamma with the zigzag endpoints 0 and +inf swapping."""
    if math.isinf(gamma):
        return 0.0
    if gamma == 0:
        return math.inf
    return 1.0 / gamma


def gamma_from_eta(eta: float) -> float:
    """Boundary parameter gamma = cos(eta) / (1 + sin(eta)).

    eta parametrizes the local boundary condition on [-pi/2, 3*pi/2);
    eta = -pi/2 maps to gamma = +inf by convention.
    """
    if not -math.pi / 2 <= eta < 3 * math.pi / 2:
        raise DomainError(f"eta must lie in [-pi/2, 3pi/2), got {eta}")
    denom = 1.0 + math.sin(eta)
    if denom == 0.0 or eta == -math.pi / 2:
        return math.inf
    return math.cos(eta) / denom


def canonicalize(fp: FiberParams) -> tuple[FiberParams, SymmetryTransform]:
    """Reduce to b > 0 and gamma in [0, +inf], recording the exact transform."""
    b, gamma, xi = fp.b, fp.gamma, fp.xi
    negate = reflect = invert = flip = False
    if b < 0:
        b, gamma, xi = -b, invert_gamma(gamma), -xi
        negate, reflect, invert, flip = True, True, True, True
    if gamma < 0:
        gamma = -gamma
        negate = not negate
        flip = not flip
    return FiberParams(b, gamma, xi), SymmetryTransform(negate, reflect, invert, flip)
