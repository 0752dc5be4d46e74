"""Edge Hall conductance from the dispersion curves.

The conductance attached to a C^2 window function F that equals 1 near a
chosen set of bulk Landau levels and 0 near the others is

    sum_j  F(lambda_j(-inf)) - F(lambda_j(+inf))

over the finitely many dispersion curves meeting the window.  Two routes
are computed: the exact integer from the asymptotic-limit catalog, and a
spectral-flow quadrature of sum_j F'(lambda_j(xi)) lambda_j'(xi), which
must reproduce the integer to quadrature accuracy.  Windows are sums of
C^2 quintic-smoothstep bumps (a cubic smoothstep is only C^1), with exact
piecewise-polynomial derivatives.

Non-canonical parameters reduce exactly: gamma < 0 reflects the window,
b < 0 reflects the window and negates the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantViolationError, WidenWindowError
from .grids import Grid
from .params import Branch, invert_gamma
from .dispersion import (DispersionCurve, asymptotic_limit, limit_plus_inf, sweep)

DEFAULT_DELTA_FACTOR = 0.3
DEFAULT_XI_FACTOR = 10.0
DEFAULT_XI_STEP = 0.002


def level_energy(k: int, b: float) -> float:
    """Landau level of signed index k: sign(k) sqrt(2 |k| |b|)."""
    return math.copysign(1.0, k) * math.sqrt(2 * abs(k) * abs(b)) if k else 0.0


def landau_levels(b: float, k_max: int) -> list[float]:
    """All levels with |k| <= k_max, sorted ascending."""
    if k_max < 0:
        raise DomainError(f"k_max must be >= 0, got {k_max}")
    return sorted(level_energy(k, b) for k in range(-k_max, k_max + 1))


def min_gap_bound(b: float, selected) -> float:
    """Largest admissible bump half-width: half the gap above any selected level."""
    return min((math.sqrt(2 * (abs(k) + 1) * abs(b))
                - math.sqrt(2 * abs(k) * abs(b))) / 2 for k in selected)


def default_delta(b: float, selected) -> float:
    return min(DEFAULT_DELTA_FACTOR * math.sqrt(abs(b)),
               0.9 * min_gap_bound(b, selected))


@dataclass(frozen=True)
class LevelWindow:
    b: float
    selected: tuple[int, ...]
    delta: float

    def __post_init__(self):
        if self.b == 0:
            raise DomainError("field strength b must be nonzero")
        sel = tuple(sorted({int(k) for k in self.selected}))
        object.__setattr__(self, "selected", sel)
        if not sel:
            raise InvariantViolationError("window must select at least one level")
        if not self.delta > 0:
            raise InvariantViolationError(f"bump half-width must be positive, got {self.delta}")
        bound = min_gap_bound(self.b, sel)
        if not self.delta < bound:
            raise InvariantViolationError(
                f"delta={self.delta} does not separate the selected levels "
                f"(needs < {bound:.6g})")

    def energies(self) -> list[float]:
        return [level_energy(k, self.b) for k in self.selected]

    def reflected(self) -> "LevelWindow":
        return LevelWindow(self.b, tuple(-k for k in self.selected), self.delta)


def _smoothstep(t):
    """Quintic smoothstep 6t^5 - 15t^4 + 10t^3: C^2, flat at both ends."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


def _smoothstep_prime(t):
    out = 30.0 * t * t * (1.0 + t * (-2.0 + t))
    return np.where((t <= 0.0) | (t >= 1.0), 0.0, out)


def build_window(w: LevelWindow):
    """Evaluators (F, F'): F is identically 1 on [E - delta/2, E + delta/2]
    and 0 outside [E - delta, E + delta] around each selected level."""
    centers = np.array(w.energies())
    half = w.delta / 2

    def F(x):
        x = np.asarray(x, dtype=float)
        r = np.abs(x[..., None] - centers)
        return np.sum(_smoothstep((w.delta - r) / half), axis=-1)

    def Fprime(x):
        x = np.asarray(x, dtype=float)
        diff = x[..., None] - centers
        t = (w.delta - np.abs(diff)) / half
        return np.sum(_smoothstep_prime(t) * (-np.sign(diff) / half), axis=-1)

    return F, Fprime


@dataclass
class ConductanceReport:
    integer_value: int
    integral_value: float | None
    per_curve: list[tuple[str, float, float, float]]  # label, F(-inf), F(+inf), contribution
    params: dict = field(default_factory=dict)


def _canonical_reduction(gamma: float, b: float, w: LevelWindow):
    """(gamma_c, b_c, w_c, negate): exact reduction to b > 0, gamma in [0, inf]."""
    negate = False
    if b < 0:
        gamma, b, w = invert_gamma(gamma), -b, LevelWindow(-w.b, w.reflected().selected, w.delta)
        negate = True
    if gamma < 0:
        gamma, w = -gamma, w.reflected()
    return gamma, b, w, negate


def _required_branches(gamma: float, b: float, w: LevelWindow, margin: int = 1):
    """Branches whose xi -> -inf limits can land inside the window support,
    plus a safety margin on each side."""
    sup_hi = max(w.energies()) + w.delta
    sup_lo = min(w.energies()) - w.delta
    plus, minus = [], []
    n = 1
    while asymptotic_limit(Branch(1, n), gamma, b) <= sup_hi:
        plus.append(Branch(1, n))
        n += 1
    plus.extend(Branch(1, m) for m in range(n, n + margin))
    n = 1
    while asymptotic_limit(Branch(-1, n), gamma, b) >= sup_lo:
        minus.append(Branch(-1, n))
        n += 1
    minus.extend(Branch(-1, m) for m in range(n, n + margin))
    return plus + minus


def conductance_by_limits(gamma: float, b: float, w: LevelWindow) -> ConductanceReport:
    """Exact integer conductance from the asymptotic-limit classification.

    Every curve escaping to +-infinity contributes F at its Landau-level
    limit; the flat band contributes F(0) - F(0) = 0.  All limits sit on
    window plateaus, so each contribution is exactly 0 or +-1.
    """
    gamma_c, b_c, w_c, negate = _canonical_reduction(gamma, b, w)
    F, _ = build_window(w_c)
    per_curve = []
    total = 0.0
    for br in _required_branches(gamma_c, b_c, w_c):
        lim_m = asymptotic_limit(br, gamma_c, b_c)
        lim_p = limit_plus_inf(br, gamma_c)
        f_m = float(F(lim_m))
        f_p = float(F(lim_p)) if math.isfinite(lim_p) else 0.0
        contrib = f_m - f_p
        label = br.label
        if negate:
            # requested curve -j runs through the canonical curve j backwards
            label = Branch(-br.sign, br.n).label
            f_m, f_p, contrib = f_p, f_m, -contrib
        per_curve.append((label, f_m, f_p, contrib))
        total += contrib
    integer = round(total)
    if abs(total - integer) > 1e-9:
        raise InvariantViolationError(f"limit classification did not give an integer: {total}")
    return ConductanceReport(int(integer), None, per_curve,
                             {"gamma": gamma, "b": b,
                              "selected": list(w.selected), "delta": w.delta})


def conductance_by_integral(gamma: float, b: float, w: LevelWindow,
                            Xi: float | None = None, j_max: int | None = None,
                            g: Grid | None = None, xi_step: float = DEFAULT_XI_STEP,
                            workers: int = 1,
                            curves: dict[str, DispersionCurve] | None = None
                            ) -> ConductanceReport:
    """Spectral-flow quadrature check of the integer conductance.

    Minus the trapezoid quadrature of sum_j F'(lambda_j) lambda_j' over
    [-Xi, Xi], with closed-form slopes.  A curve sitting inside a bump
    transition at +-Xi means the momentum window is too narrow and raises
    WidenWindowError.  Precomputed curves (keyed by branch label, covering
    [-Xi, Xi]) are reused when supplied, e.g. across several windows.
    """
    report = conductance_by_limits(gamma, b, w)
    gamma_c, b_c, w_c, negate = _canonical_reduction(gamma, b, w)
    if Xi is None:
        Xi = DEFAULT_XI_FACTOR * math.sqrt(b_c)
    if Xi < 8.0 * math.sqrt(b_c):
        raise DomainError(f"momentum half-width {Xi} is below the 8 sqrt(b) minimum")
    branches = _required_branches(gamma_c, b_c, w_c)
    if j_max is not None:
        missing = [br.label for br in branches if br.n > j_max]
        if missing:
            raise WidenWindowError(
                f"j_max={j_max} excludes branches {missing} whose limits lie "
                f"inside the window support")
    if curves is None:
        steps = max(int(math.ceil(2 * Xi / xi_step)) + 1, 2)
        curve_list = sweep(gamma_c, b_c, -Xi, Xi, steps, branches,
                           workers=workers, grid=g)
        curves = {cv.branch.label: cv for cv in curve_list}
    _, Fp = build_window(w_c)
    total = 0.0
    per_branch = {}
    for br in branches:
        cv = curves.get(br.label)
        if cv is None:
            raise WidenWindowError(f"no precomputed curve for branch {br.label}")
        sel = (cv.xis >= -Xi - 1e-12) & (cv.xis <= Xi + 1e-12)
        if not np.any(sel) or cv.xis[sel][0] > -Xi + 1e-9 or cv.xis[sel][-1] < Xi - 1e-9:
            raise WidenWindowError(f"curve {br.label} does not cover [-Xi, Xi]")
        xis = cv.xis[sel]
        lam = br.sign * cv.lambdas[sel]
        slopes = cv.slopes[sel]
        if abs(float(Fp(lam[0]))) > 0 or abs(float(Fp(lam[-1]))) > 0:
            raise WidenWindowError(
                f"curve {br.label} crosses a window edge at xi = +-{Xi}; widen Xi")
        contrib = -float(np.trapezoid(Fp(lam) * slopes, xis))
        if negate:
            contrib = -contrib
        label = br.label if not negate else Branch(-br.sign, br.n).label
        per_branch[label] = contrib
        total += contrib
    report.integral_value = total
    report.params.update({"Xi": Xi, "xi_step": xi_step,
                          "per_curve_integral": per_branch})
    return report
