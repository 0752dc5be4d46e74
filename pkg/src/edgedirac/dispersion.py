"""Dispersion curves theta_n^{+-}(gamma, xi) for the fiber Dirac operators.

Production path for gamma in (0, +inf): theta is the unique positive root
of f(lambda) = nu_n^{sign}(c lambda, xi) - lambda^2 with c = gamma for the
positive branches and c = 1/gamma for the negative ones.  The root is
bracketed from [0, Lambda_0] by doubling (f(0) >= 0 holds in the
continuum; existence of the sign change is a theorem, so a missing bracket
signals a solver or grid fault) and polished by Newton steps computed from
the closed-form derivative f'(lambda) = c u(0)^2 - 2 lambda, safeguarded
by bisection whenever a step leaves the bracket.

Zigzag boundary parameters dispatch to closed forms in the Dirichlet
eigenvalues: theta_n(+inf, xi) = sqrt(nu_n^Dir(b, xi) - 2b) on both branch
signs, theta_1^+(0, .) = 0 flat, theta_n^+(0, xi) = sqrt(nu_{n-1}^Dir) for
n >= 2, theta_n^-(0, xi) = sqrt(nu_n^Dir).

Curve slopes come from implicit differentiation of the fixed-point
equation, never from numerical differentiation of samples.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, DomainError, EdgeDiracError
from .grids import Grid, auto_domain
from .params import (GAMMA_INF_CLAMP, GAMMA_ZERO_CLAMP, Branch, FiberParams,
                     SymmetryTransform, canonicalize, gamma_from_eta, invert_gamma)
from .robin import (DirichletParams, EigenPair, RobinFamily, nu_dirichlet,
                    nu_partial_alpha, nu_partial_xi, nu_partial_xi_dirichlet)

__all__ = [
    "Branch", "FiberParams", "SymmetryTransform", "DispersionCurve",
    "gamma_from_eta", "canonicalize", "theta", "theta_pair", "curve_slope",
    "sweep", "critical_point", "gap_profile", "asymptotic_limit",
    "is_zigzag_zero", "is_zigzag_inf",
]

FIXED_POINT_TOL = 1e-10
MAX_DOUBLINGS = 6
CRITICAL_SLOPE_TOL = 1e-8
CRITICAL_XI_CAP = 20.0  # times sqrt(b)


@dataclass(frozen=True)
class DispersionCurve:
    branch: Branch
    gamma: float
    b: float
    xis: np.ndarray
    lambdas: np.ndarray  # theta magnitudes, positive; sign applied on output
    slopes: np.ndarray  # d lambda_j / d xi of the signed curve
    limit_minus_inf: float

    def signed_values(self) -> np.ndarray:
        return self.branch.sign * self.lambdas


def is_zigzag_zero(gamma: float) -> bool:
    return abs(gamma) <= GAMMA_ZERO_CLAMP


def is_zigzag_inf(gamma: float) -> bool:
    return math.isinf(gamma) or gamma >= GAMMA_INF_CLAMP


def _require_canonical(fp: FiberParams):
    if not fp.is_canonical:
        raise DomainError(
            f"theta expects canonical parameters (b > 0, gamma >= 0); "
            f"got b={fp.b}, gamma={fp.gamma}; use canonicalize()")


def _zigzag_theta_pair(br: Branch, fp: FiberParams, g: Grid,
                       seed_pair: EigenPair | None):
    """Closed zigzag forms; the returned pair is the Dirichlet one feeding
    the square root (None for the flat band)."""
    if is_zigzag_inf(fp.gamma):
        n_dir, shift = br.n, 2 * fp.b
    elif br.sign > 0 and br.n == 1:
        return 0.0, None
    else:
        n_dir, shift = (br.n - 1 if br.sign > 0 else br.n), 0.0
    bracket = None
    if seed_pair is not None and isinstance(seed_pair.params, DirichletParams):
        dxi = fp.xi - seed_pair.params.xi
        slack = 4.0 * abs(dxi) * (abs(nu_partial_xi_dirichlet(seed_pair)) + 1.0) \
            + 1e-7 * (1.0 + abs(seed_pair.nu))
        bracket = (seed_pair.nu - slack, seed_pair.nu + slack)
    e = nu_dirichlet(fp.b, fp.xi, n_dir, g, bracket=bracket)
    return math.sqrt(max(e.nu - shift, 0.0)), e


def theta_pair(br: Branch, fp: FiberParams, g: Grid, seed: float | None = None,
               seed_pair: EigenPair | None = None) -> tuple[float, EigenPair | None]:
    """Theta plus the eigenpair at the solution (Robin for interior gamma,
    Dirichlet for zigzag, None for the flat band).

    seed and seed_pair warm-start the Newton iteration and the inner
    eigenvalue brackets, e.g. from a neighboring momentum sample; they
    never change the root, only the path to it.
    """
    _require_canonical(fp)
    if is_zigzag_zero(fp.gamma) or is_zigzag_inf(fp.gamma):
        return _zigzag_theta_pair(br, fp, g, seed_pair)
    c = fp.gamma if br.sign > 0 else invert_gamma(fp.gamma)
    family = RobinFamily(br.sign, fp.b, fp.xi, g)
    n = br.n
    # O(h^2) drift of deep-tail states can push the discrete nu slightly
    # negative; only runaway values signal an unresolved assembly here
    nu_floor = -0.05 * (1.0 + fp.xi ** 2)

    if seed_pair is not None and isinstance(seed_pair.params, DirichletParams):
        seed_pair = None

    last: dict = {"pair": seed_pair}

    def f_eval(lam: float) -> float:
        prev = last["pair"]
        bracket = None
        if prev is not None:
            drift = abs(c * lam - prev.params.alpha) * max(prev.u0 ** 2, 0.5)
            if prev.params.xi != fp.xi:
                drift += abs(fp.xi - prev.params.xi) * (abs(nu_partial_xi(prev)) + 1.0)
            slack = 2.0 * drift + 1e-7 * (1.0 + abs(prev.nu))
            bracket = (prev.nu - slack, prev.nu + slack)
        pair = family.eigen(c * lam, n, bracket=bracket, nu_floor=nu_floor)
        last["pair"] = pair
        return pair.nu - lam * lam

    lam_max = 10.0 * math.sqrt(2 * (n + 2) * fp.b)
    hi = min(math.sqrt(2 * (n + 1) * fp.b) + 1.0, lam_max)
    doublings = 0
    while f_eval(hi) >= 0:
        if hi >= lam_max or doublings >= MAX_DOUBLINGS:
            raise BracketError(
                f"no sign change of the fixed-point function up to lambda={hi:.3g} "
                f"for branch {br.label}, gamma={fp.gamma}, xi={fp.xi}")
        hi = min(2 * hi, lam_max)
        doublings += 1
    lo = 0.0  # f(0) >= 0 in the continuum
    seeded = seed is not None and lo < seed < hi
    lam = seed if seeded else 0.5 * (lo + hi)
    for it in range(200):
        fval = f_eval(lam)
        pair = last["pair"]
        if abs(fval) <= FIXED_POINT_TOL * (1.0 + lam * lam):
            return lam, pair
        if fval >= 0:
            lo = lam
        elif it == 0 and seeded and br.sign > 0 and n == 1:
            # discrete f can dip below zero near lambda = 0 on this branch
            # (the alpha -> 0 zero mode drifts O(h^2) negative); a stale seed
            # inside that dip must not shrink the bracket past the real root
            lam = 0.5 * (lo + hi)
            continue
        else:
            hi = lam
        if hi - lo <= 4e-16 * max(1.0, hi):
            # bracket exhausted; the root is at rounding level (curve
            # exponentially pinned to its Landau limit) or swallowed by the
            # O(h^2) dip, in which case 0 is correct to discretization error
            return lam, pair
        fprime = c * pair.u0 ** 2 - 2.0 * lam
        step = lam - fval / fprime if fprime != 0 else math.inf
        lam = step if lo < step < hi else 0.5 * (lo + hi)
    raise BracketError(
        f"fixed-point iteration did not converge for branch {br.label}, "
        f"gamma={fp.gamma}, xi={fp.xi}")


def theta(br: Branch, fp: FiberParams, g: Grid) -> float:
    """Positive magnitude of the dispersion branch at (gamma, b, xi)."""
    return theta_pair(br, fp, g)[0]


def curve_slope(br: Branch, fp: FiberParams, theta_val: float,
                e: EigenPair | None) -> float:
    """d lambda_j / d xi of the signed curve, from closed forms only.

    For interior gamma: theta' = -d_xi nu / (c d_alpha nu - 2 theta); the
    denominator is negative whenever theta solves the fixed point, which is
    asserted.  For zigzag parameters theta = sqrt(nu^Dir - shift), so
    theta' = d_xi nu^Dir / (2 theta).
    """
    _require_canonical(fp)
    if e is None:
        return 0.0  # flat band
    if theta_val < 1e-9:
        # theta at rounding level: the curve hugs a Landau level and the
        # fixed-point denominator identity has no leverage there
        return 0.0
    if isinstance(e.params, DirichletParams):
        if theta_val == 0.0:
            return 0.0
        s = nu_partial_xi_dirichlet(e) / (2.0 * theta_val)
    else:
        c = fp.gamma if br.sign > 0 else invert_gamma(fp.gamma)
        denom = c * nu_partial_alpha(e) - 2.0 * theta_val
        if denom >= 0:
            raise EdgeDiracError(
                f"fixed-point denominator {denom:.3e} >= 0 at branch {br.label}, "
                f"gamma={fp.gamma}, xi={fp.xi}; slope identity violated")
        s = -nu_partial_xi(e) / denom
    return s if br.sign > 0 else -s


def asymptotic_limit(br: Branch, gamma: float, b: float) -> float:
    """Catalog value of lim_{xi -> -inf} lambda_j for canonical parameters.

    All curves settle onto bulk Landau levels: sqrt(2(n-1)b) for positive
    branches and -sqrt(2nb) for negative ones, except that for gamma = +inf
    both signs reach +-sqrt(2(n-1)b) (the source of the n+1 anomaly).
    """
    if b <= 0:
        raise DomainError("asymptotic catalog expects canonical b > 0")
    if is_zigzag_inf(gamma):
        return br.sign * math.sqrt(2 * (br.n - 1) * b)
    if br.sign > 0:
        return math.sqrt(2 * (br.n - 1) * b)
    return -math.sqrt(2 * br.n * b)


def limit_plus_inf(br: Branch, gamma: float) -> float:
    """lim_{xi -> +inf} lambda_j: the flat band stays at 0, everything else
    escapes to the branch-signed infinity."""
    if is_zigzag_zero(gamma) and br.sign > 0 and br.n == 1:
        return 0.0
    return br.sign * math.inf


def _solve_branch_curve(br_req: Branch, can: FiberParams, t: SymmetryTransform,
                        xis_req: np.ndarray, g: Grid):
    """One requested curve via its canonical twin, warm-started along xi."""
    br_can = t.map_branch(br_req)
    xis_can = t.map_xi(xis_req)
    order = np.argsort(xis_can)
    thetas = np.empty(len(xis_req))
    slopes_can = np.empty(len(xis_req))
    seed = None
    seed_pair = None
    for idx in order:
        fp_i = FiberParams(can.b, can.gamma, float(xis_can[idx]))
        try:
            th, pair = theta_pair(br_can, fp_i, g, seed=seed, seed_pair=seed_pair)
            slopes_can[idx] = curve_slope(br_can, fp_i, th, pair)
        except EdgeDiracError as exc:
            raise type(exc)(f"{exc} [branch {br_req.label}, xi={xis_req[idx]}]") from exc
        thetas[idx] = th
        seed = th if th > 1e-8 else None  # collapsed tail values do not seed
        seed_pair = pair
    slopes_req = t.slope_factor() * slopes_can
    lim_can = (limit_plus_inf(br_can, can.gamma) if t.reflect_xi
               else asymptotic_limit(br_can, can.gamma, can.b))
    return DispersionCurve(br_req, math.nan, math.nan, xis_req, thetas,
                           slopes_req, t.map_value(lim_can))


def sweep(gamma: float, b: float, xi_min: float, xi_max: float, steps: int,
          branches: list[Branch], workers: int = 1,
          grid: Grid | None = None) -> list[DispersionCurve]:
    """Dispersion curves for each branch on a uniform momentum grid.

    Results are keyed by branch and ascending xi and do not depend on the
    worker count; parallelism is across branches, each of which is a pure
    warm-started chain of fixed-point solves.
    """
    if not xi_min < xi_max:
        raise DomainError(f"need xi_min < xi_max, got {xi_min} >= {xi_max}")
    if steps < 2:
        raise DomainError(f"need at least 2 samples, got {steps}")
    if not branches:
        raise DomainError("no branches requested")
    can, t = canonicalize(FiberParams(b, gamma, 0.0))
    xis = np.linspace(xi_min, xi_max, steps)
    if grid is None:
        xi_lo_can = min(float(np.min(t.map_xi(xis))), 0.0)
        grid = auto_domain(can.b, xi_lo_can, max(br.n for br in branches) + 1)

    def run(br: Branch) -> DispersionCurve:
        c = _solve_branch_curve(br, can, t, xis, grid)
        return DispersionCurve(c.branch, gamma, b, c.xis, c.lambdas, c.slopes,
                               c.limit_minus_inf)

    if workers > 1 and len(branches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, branches))
    return [run(br) for br in branches]


def critical_point(gamma: float, b: float, n: int, g: Grid) -> tuple[float, float]:
    """Unique minimizer (xi*, theta*) of theta_n^-(gamma, .).

    Bisection on the sign of the closed-form slope over an automatically
    expanded bracket, refined until |slope| <= 1e-8.  Zigzag parameters are
    rejected: those negative curves are monotone and have no critical point.
    """
    if is_zigzag_zero(gamma) or is_zigzag_inf(gamma) or gamma < 0:
        raise DomainError("critical points exist only for gamma in (0, +inf)")
    if b <= 0:
        raise DomainError("critical_point expects canonical b > 0")
    br = Branch(-1, n)
    state = {"seed": None}

    def slope_mag(xi: float) -> float:
        fp = FiberParams(b, gamma, xi)
        th, pair = theta_pair(br, fp, g, seed=state["seed"])
        state["seed"] = th
        return -curve_slope(br, fp, th, pair)  # d theta^- / d xi

    cap = CRITICAL_XI_CAP * math.sqrt(b)
    lo, hi = -2.0 * math.sqrt(b), 2.0 * math.sqrt(b)
    while slope_mag(lo) >= 0:
        lo *= 2
        if abs(lo) > cap:
            raise BracketError(f"no descending slope of theta_{n}^- down to xi={lo:.3g}")
    while slope_mag(hi) <= 0:
        hi *= 2
        if hi > cap:
            raise BracketError(f"no ascending slope of theta_{n}^- up to xi={hi:.3g}")
    xi_star = 0.5 * (lo + hi)
    for _ in range(200):
        s = slope_mag(xi_star)
        if abs(s) <= CRITICAL_SLOPE_TOL:
            break
        if s < 0:
            lo = xi_star
        else:
            hi = xi_star
        nxt = 0.5 * (lo + hi)
        if nxt == xi_star:
            break
        xi_star = nxt
    th_star = theta(br, FiberParams(b, gamma, xi_star), g)
    return xi_star, th_star


def gap_profile(b: float, gamma_list, g: Grid) -> list[tuple[float, float]]:
    """Maximal negative energy -min_xi theta_1^-(gamma, .) per gamma.

    Zigzag endpoints come from the closed-form infima: -sqrt(2b) at
    gamma = 0 and 0 at gamma = +inf (neither is attained at finite xi).
    """
    if b <= 0:
        raise DomainError("gap_profile expects canonical b > 0")
    out = []
    for gamma in gamma_list:
        if is_zigzag_zero(gamma):
            val = -math.sqrt(2 * b)
        elif is_zigzag_inf(gamma):
            val = 0.0
        else:
            _, th_star = critical_point(gamma, b, 1, g)
            val = -th_star
        out.append((gamma, val))
    return out
