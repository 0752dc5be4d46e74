"""Invariant suite behind the `validate` CLI command and the acceptance
tests.

Each check returns a CheckResult with the worst observed error so failures
are diagnosable from the printed table.  Checks only use closed-form
oracles (odd-Hermite levels, Landau limits, catalog integers), finite
differences, and the independent staggered-grid Dirac route; nothing is
compared against the code path that produced it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .conductance import (LevelWindow, conductance_by_integral,
                          conductance_by_limits, default_delta)
from .dirac import (assemble_dirac, dirac_eigenspinor, dirac_residual,
                    dirac_spectrum_window, feynman_hellmann_velocity,
                    reconstruct_spinor)
from .dispersion import (critical_point, curve_slope, gap_profile, sweep,
                         theta, theta_pair)
from .grids import Grid, auto_domain, make_grid
from .params import Branch, FiberParams, canonicalize
from .robin import (RobinFamily, nu_dirichlet, nu_partial_alpha, nu_partial_xi)
from .tridiag import eigenvalues_by_range, sturm_count

SQ2 = math.sqrt(2.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, err: float, tol: float, extra: str = "") -> CheckResult:
    detail = f"max err {err:.3e} (tol {tol:.0e})"
    if extra:
        detail += f"; {extra}"
    return CheckResult(name, err <= tol, detail)


# --- 1. odd-Hermite oracle ---------------------------------------------------

def check_odd_hermite() -> CheckResult:
    g = make_grid(12.0, 1200)
    worst = 0.0
    for b, n, want in [(1.0, 1, 4.0), (1.0, 2, 8.0), (-1.0, 1, 2.0)]:
        got = nu_dirichlet(b, 0.0, n, g).nu
        worst = max(worst, abs(got - want) / want)
    e1 = abs(nu_dirichlet(1.0, 0.0, 1, g).nu - 4.0)
    e2 = abs(nu_dirichlet(1.0, 0.0, 1, g.refined()).nu - 4.0)
    ratio = e1 / e2
    ok_ratio = 3.5 <= ratio <= 4.5
    res = _result("odd-hermite levels", worst, 1e-3, f"h->h/2 error ratio {ratio:.2f}")
    res.passed = res.passed and ok_ratio
    return res


# --- 2. Landau limits --------------------------------------------------------

def check_landau_limits() -> CheckResult:
    g = auto_domain(1.0, -8.0, 4)
    worst = 0.0
    for gamma in (0.5, 1.0, 2.0):
        fp = FiberParams(1.0, gamma, -8.0)
        for n in (1, 2, 3):
            worst = max(worst, abs(theta(Branch(1, n), fp, g) - math.sqrt(2 * (n - 1))))
            worst = max(worst, abs(theta(Branch(-1, n), fp, g) - math.sqrt(2 * n)))
    return _result("landau limits at xi=-8", worst, 2e-3)


# --- 3. zigzag closed forms --------------------------------------------------

def check_zigzag_forms() -> CheckResult:
    g = auto_domain(1.0, -3.0, 4)
    worst = 0.0
    for n in (1, 2, 3):
        fp = FiberParams(1.0, math.inf, 0.0)
        worst = max(worst, abs(theta(Branch(1, n), fp, g) - math.sqrt(4 * n - 2)))
    for n in (2, 3):
        fp = FiberParams(1.0, 0.0, 0.0)
        worst = max(worst, abs(theta(Branch(1, n), fp, g) - math.sqrt(4 * (n - 1))))
    for xi in (-3.0, 0.0, 3.0):
        worst = max(worst, abs(theta(Branch(1, 1), FiberParams(1.0, 0.0, xi), g)))
    sym = 0.0
    for gamma, k in ((0.0, 9), (math.inf, 8)):  # odd k keeps the zero mode paired
        vals = np.sort(dirac_spectrum_window(FiberParams(1.0, gamma, 0.7), g, k))
        sym = max(sym, float(np.max(np.abs(vals + vals[::-1]))))
    res = _result("zigzag closed forms", worst, 2e-3, f"spectral symmetry {sym:.1e}")
    res.passed = res.passed and sym <= 1e-6
    return res


# --- 4. cross-oracle agreement ----------------------------------------------

def check_cross_oracle() -> CheckResult:
    g = auto_domain(1.0, -4.0, 4)
    worst = 0.0
    for gamma in (0.5, 1.0, 2.0):
        for xi in (-4.0, -1.0, 0.0, 1.0, 4.0):
            fp = FiberParams(1.0, gamma, xi)
            spec = dirac_spectrum_window(fp, g, 8)
            pos = np.sort(spec[spec > 1e-8])
            neg = np.sort(np.abs(spec[spec < -1e-8]))
            for n in (1, 2, 3):
                th_p = theta(Branch(1, n), fp, g)
                if th_p > 1e-6 and n <= len(pos):
                    worst = max(worst, abs(th_p - pos[n - 1]) / (1 + th_p))
                th_m = theta(Branch(-1, n), fp, g)
                if n <= len(neg):
                    worst = max(worst, abs(th_m - neg[n - 1]) / (1 + th_m))
    return _result("fixed point vs staggered Dirac", worst, 1e-3)


# --- 5. derivative identities ------------------------------------------------

def check_derivatives() -> CheckResult:
    g = auto_domain(1.0, -4.0, 3)
    delta = 1e-4
    worst_fd = 0.0
    for sign, gamma, xi, n in [(1, 1.0, 0.7, 1), (-1, 0.5, -1.0, 2), (1, 2.0, -2.0, 2)]:
        c = gamma if sign > 0 else 1 / gamma
        fam = RobinFamily(sign, 1.0, xi, g)
        fp = FiberParams(1.0, gamma, xi)
        th, pair = theta_pair(Branch(sign, n), fp, g)
        alpha = c * th
        fd_a = (fam.eigen(alpha + delta, n).nu - fam.eigen(alpha - delta, n).nu) / (2 * delta)
        worst_fd = max(worst_fd, abs(nu_partial_alpha(pair) - fd_a))
        fam_p = RobinFamily(sign, 1.0, xi + delta, g)
        fam_m = RobinFamily(sign, 1.0, xi - delta, g)
        fd_x = (fam_p.eigen(alpha, n).nu - fam_m.eigen(alpha, n).nu) / (2 * delta)
        worst_fd = max(worst_fd, abs(nu_partial_xi(pair) - fd_x))
    worst_slope = 0.0
    dxi = 1e-3
    for gamma, xi, br in [(1.0, 0.3, Branch(1, 1)), (1.0, -1.5, Branch(-1, 1)),
                          (0.5, -0.5, Branch(1, 2))]:
        fp = FiberParams(1.0, gamma, xi)
        th, pair = theta_pair(br, fp, g)
        sl = curve_slope(br, fp, th, pair)
        fd = (br.sign * theta(br, FiberParams(1.0, gamma, xi + dxi), g)
              - br.sign * theta(br, FiberParams(1.0, gamma, xi - dxi), g)) / (2 * dxi)
        worst_slope = max(worst_slope, abs(sl - fd))
    # Feynman-Hellmann velocity from the reconstructed spinor
    fp = FiberParams(1.0, 1.0, 0.0)
    th, pair = theta_pair(Branch(1, 1), fp, g)
    spinor = reconstruct_spinor(pair, th, fp, g)
    vel = feynman_hellmann_velocity(spinor)
    sl = curve_slope(Branch(1, 1), fp, th, pair)
    worst_vel = abs(vel - sl)
    resid = dirac_residual(spinor, g)
    res = _result("derivative identities", max(worst_fd, worst_slope / 2, worst_vel / 2),
                  1e-3, f"fd {worst_fd:.1e}, slope {worst_slope:.1e}, "
                        f"velocity {worst_vel:.1e}, spinor residual {resid:.1e}")
    res.passed = (worst_fd <= 1e-3 and worst_slope <= 2e-3 and worst_vel <= 2e-3
                  and resid <= 5e-3 * (1 + th))
    return res


# --- 6. critical points ------------------------------------------------------

def check_critical_points() -> CheckResult:
    g = auto_domain(1.0, -8.0, 3)
    worst_rel = 0.0
    details = []
    ok = True
    for gamma in (0.5, 1.0, 2.0):
        xi_s, th_s = critical_point(gamma, 1.0, 1, g)
        rel = abs(th_s + 2 * gamma * xi_s / (gamma ** 2 + 1))
        worst_rel = max(worst_rel, rel)
        # unique sign change of the slope on a coarse scan
        br = Branch(-1, 1)
        signs = []
        for xi in np.linspace(-6.0, 4.0, 26):
            fp = FiberParams(1.0, gamma, float(xi))
            th, pair = theta_pair(br, fp, g)
            signs.append(math.copysign(1.0, -curve_slope(br, fp, th, pair)))
        flips = sum(1 for a, b2 in zip(signs, signs[1:]) if a != b2)
        ok &= flips == 1
        # non-degenerate minimum: positive second difference
        d = 0.05
        th_p = theta(br, FiberParams(1.0, gamma, xi_s + d), g)
        th_m = theta(br, FiberParams(1.0, gamma, xi_s - d), g)
        ok &= th_p + th_m - 2 * th_s > 0
        details.append(f"gamma={gamma}: xi*={xi_s:.4f} theta*={th_s:.4f}")
        if gamma == 1.0:
            ok &= 0.0 < th_s < SQ2
    res = _result("critical points", worst_rel, 2e-3, "; ".join(details))
    res.passed = res.passed and ok
    return res


# --- 7. monotonicity and zigzag limits ----------------------------------------

def check_monotonicity() -> CheckResult:
    g = auto_domain(1.0, -6.0, 4)
    ok = True
    notes = []
    # theta+ increasing in xi (slopes positive along a sweep)
    curves = sweep(1.0, 1.0, -6.0, 4.0, 41, [Branch(1, n) for n in (1, 2, 3)])
    for cv in curves:
        ok &= bool(np.all(np.diff(cv.lambdas) > -1e-12))
        ok &= bool(np.all(cv.slopes > -1e-12))
    # gamma-monotonicity pointwise in xi
    gammas = [0.1, 0.5, 1.0, 2.0, 10.0]
    for xi in (-2.0, 0.0, 2.0):
        for n in (1, 2):
            tp = [theta(Branch(1, n), FiberParams(1.0, gm, xi), g) for gm in gammas]
            tm = [theta(Branch(-1, n), FiberParams(1.0, gm, xi), g) for gm in gammas]
            ok &= all(b2 > a for a, b2 in zip(tp, tp[1:]))
            ok &= all(b2 < a for a, b2 in zip(tm, tm[1:]))
    # Dirichlet ordering and xi-monotonicity
    for xi in (-3.0, 0.0, 2.0):
        nus = [nu_dirichlet(1.0, xi, n, g).nu for n in (1, 2, 3)]
        ok &= 2.0 < nus[0] < nus[1] < nus[2]
    for n in (1, 2):
        vals = [nu_dirichlet(1.0, xi, n, g).nu for xi in np.linspace(-4, 3, 8)]
        ok &= all(b2 > a for a, b2 in zip(vals, vals[1:]))
    # sandwich nu-_n(alpha, xi) <= nuDir_n(b, xi)
    for alpha in (0.5, 2.0):
        for xi in (-1.0, 1.0):
            fam = RobinFamily(-1, 1.0, xi, g)
            for n in (1, 2, 3):
                ok &= fam.eigen(alpha, n).nu <= nu_dirichlet(1.0, xi, n, g).nu + 1e-9
    # alpha -> 0 identities (fine grid: the n=1 zero mode drifts O(h^2))
    gf = make_grid(14.0, 7000)
    worst0 = abs(RobinFamily(1, 1.0, 0.4, gf).eigen(0.0, 1).nu)
    for n, xi in [(2, 0.4), (3, -1.0)]:
        a = RobinFamily(1, 1.0, xi, gf).eigen(0.0, n).nu
        b2 = nu_dirichlet(1.0, xi, n - 1, gf).nu
        worst0 = max(worst0, abs(a - b2) / abs(b2))
    for n, xi in [(1, 0.4), (2, -1.0)]:
        a = RobinFamily(-1, 1.0, xi, gf).eigen(0.0, n).nu
        b2 = nu_dirichlet(-1.0, -xi, n, gf).nu
        worst0 = max(worst0, abs(a - b2) / abs(b2))
    ok &= worst0 <= 2e-3
    notes.append(f"alpha->0 identities {worst0:.1e}")
    # zigzag pointwise limits in gamma
    gz = make_grid(16.0, 16000)
    worstz = 0.0
    for xi in (-4.0, 0.0, 4.0):
        for br in (Branch(1, 1), Branch(1, 2), Branch(-1, 1)):
            lo = abs(theta(br, FiberParams(1.0, 1e-3, xi), gz)
                     - theta(br, FiberParams(1.0, 0.0, xi), gz))
            hi = abs(theta(br, FiberParams(1.0, 1e3, xi), gz)
                     - theta(br, FiberParams(1.0, math.inf, xi), gz))
            worstz = max(worstz, lo, hi)
    ok &= worstz <= 0.05
    notes.append(f"zigzag gamma-limits {worstz:.2e}")
    # gap profile: increasing toward 0, endpoint -sqrt(2b) at gamma -> 0
    rows = gap_profile(1.0, [0.0, 0.25, 1.0, 4.0, math.inf], auto_domain(1.0, -8.0, 2))
    vals = [v for _, v in rows]
    ok &= all(b2 > a for a, b2 in zip(vals, vals[1:]))
    ok &= abs(vals[0] + SQ2) <= 5e-3
    ok &= -SQ2 < vals[2] < 0
    notes.append(f"gap endpoints {vals[0]:.4f}..{vals[-1]:.4f}")
    return CheckResult("monotonicity suites", ok, "; ".join(notes))


# --- 8. conductance ----------------------------------------------------------

def _expected_integer(gamma: float, selected: tuple[int, ...]) -> int:
    n = len(selected)
    if 0 not in selected:
        return n
    if gamma == 0:
        return n - 1
    if math.isinf(gamma):
        return n + 1
    return n


def conductance_sweeps(workers: int = 1, xi_step: float = 0.004,
                       grid: Grid | None = None) -> dict:
    """Shared wide sweeps reused by every window and stability variant."""
    if grid is None:
        grid = auto_domain(1.0, -15.0, 4)
    branches = [Branch(1, n) for n in (1, 2, 3)] + [Branch(-1, n) for n in (1, 2, 3)]
    steps = int(round(30.0 / xi_step)) + 1
    out = {}
    for gamma in (0.0, 0.3, 1.0, 3.0, math.inf):
        curves = sweep(gamma, 1.0, -15.0, 15.0, steps, branches,
                       workers=workers, grid=grid)
        out[gamma] = {cv.branch.label: cv for cv in curves}
    return out


def check_conductance_integers() -> CheckResult:
    ok = True
    rows = []
    for gamma in (0.0, 0.3, 1.0, 3.0, math.inf):
        for selected in [(0,), (0, 1), (-1, 0, 1)]:
            w = LevelWindow(1.0, selected, default_delta(1.0, selected))
            rep = conductance_by_limits(gamma, 1.0, w)
            want = _expected_integer(gamma, selected)
            ok &= rep.integer_value == want
            # contributions are each exactly 0 or +-1 and sum to the integer
            ok &= all(c in (0.0, 1.0, -1.0) for *_, c in rep.per_curve)
            ok &= round(sum(c for *_, c in rep.per_curve)) == rep.integer_value
            # window independence: halved bump width, same integer
            w2 = LevelWindow(1.0, selected, w.delta / 2)
            ok &= conductance_by_limits(gamma, 1.0, w2).integer_value == want
            rows.append(f"g={gamma:g},{selected}:{rep.integer_value}")
    # sign rule for b < 0
    ok &= conductance_by_limits(0.7, -1.0, LevelWindow(-1.0, (0,), 0.25)).integer_value == -1
    ok &= conductance_by_limits(0.0, -1.0, LevelWindow(-1.0, (0,), 0.25)).integer_value == -2
    ok &= conductance_by_limits(math.inf, -1.0, LevelWindow(-1.0, (0,), 0.25)).integer_value == 0
    ok &= conductance_by_limits(-1.0, 1.0, LevelWindow(1.0, (0,), 0.25)).integer_value == 1
    return CheckResult("conductance integer table", ok,
                       "n-1/n/n+1 table incl. b<0 sign rule")


def check_conductance_integral(sweeps: dict | None = None,
                               workers: int = 1) -> CheckResult:
    if sweeps is None:
        sweeps = conductance_sweeps(workers=workers)
    worst = 0.0
    worst_stab = 0.0
    ok = True
    for gamma in (0.0, 0.3, 1.0, 3.0, math.inf):
        curves = sweeps[gamma]
        for selected in [(0,), (0, 1), (-1, 0, 1)]:
            delta = default_delta(1.0, selected)
            w = LevelWindow(1.0, selected, delta)
            rep = conductance_by_integral(gamma, 1.0, w, Xi=10.0, curves=curves)
            want = _expected_integer(gamma, selected)
            ok &= rep.integer_value == want
            worst = max(worst, abs(rep.integral_value - want))
            half = conductance_by_integral(gamma, 1.0, LevelWindow(1.0, selected, delta / 2),
                                           Xi=10.0, curves=curves)
            wide = conductance_by_integral(gamma, 1.0, w, Xi=15.0, curves=curves)
            worst_stab = max(worst_stab, abs(half.integral_value - rep.integral_value),
                             abs(wide.integral_value - rep.integral_value))
    # b < 0: integral flips sign (canonical gamma=1 curves reused)
    repn = conductance_by_integral(1.0, -1.0, LevelWindow(-1.0, (0,), 0.25),
                                   Xi=10.0, curves=sweeps[1.0])
    ok &= repn.integer_value == -1
    worst = max(worst, abs(repn.integral_value + 1.0))
    res = _result("conductance spectral flow", worst, 1e-2,
                  f"stability under delta/2 and 1.5 Xi: {worst_stab:.1e}")
    res.passed = res.passed and ok and worst_stab <= 1e-2
    return res


# --- 9. symmetry and zero modes ----------------------------------------------

def check_symmetry() -> CheckResult:
    g = auto_domain(1.0, -4.0, 4)
    worst = 0.0
    for fp_raw in (FiberParams(-1.0, 2.0, 0.3), FiberParams(1.0, -3.0, 0.3),
                   FiberParams(-1.0, -0.5, -0.7)):
        can, t = canonicalize(fp_raw)
        direct = np.sort(dirac_spectrum_window(fp_raw, g, 6))
        mapped = np.sort(t.map_value(dirac_spectrum_window(can, g, 6)))
        worst = max(worst, float(np.max(np.abs(direct - mapped))))
    ok = worst <= 1e-6
    # zero-mode dichotomy and gap margins
    margins = []
    for gamma in (0.0, 0.5, 1.0, 2.0, math.inf):
        for xi in (-2.0, 0.0, 2.0):
            vals = dirac_spectrum_window(FiberParams(1.0, gamma, xi), g, 2)
            m = float(np.min(np.abs(vals)))
            if gamma == 0.0:
                ok &= m <= 1e-6
            else:
                ok &= m > 1e-6
        m0 = float(np.min(np.abs(dirac_spectrum_window(FiberParams(1.0, gamma, 0.0), g, 2))))
        if gamma != 0.0:
            ok &= m0 >= 0.3
            margins.append(f"{gamma:g}:{m0:.3f}")
    return CheckResult("symmetry and zero modes", ok,
                       f"canonical map dev {worst:.1e}; gaps at xi=0 " + " ".join(margins))


# --- 10. determinism ---------------------------------------------------------

def check_determinism() -> CheckResult:
    from . import cli

    def run(args) -> bytes:
        import contextlib
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(args)
        if code != 0:
            raise RuntimeError(f"cli failed: {args}")
        return buf.getvalue().encode()

    ok = True
    outs = []
    for wk in ("1", "4", "8"):
        outs.append(run(["dispersion", "--b", "1", "--gamma", "0.6",
                         "--xi", "-3:1:25", "--branches", "+1,-1,+2",
                         "--workers", wk]))
    ok &= outs[0] == outs[1] == outs[2]
    outs = []
    for wk in ("1", "4", "8"):
        outs.append(run(["conductance", "--b", "1", "--gamma", "0.8",
                         "--levels", "0", "--xi-step", "0.05", "--workers", wk]))
    ok &= outs[0] == outs[1] == outs[2]
    return CheckResult("determinism across workers", ok,
                       "byte-identical CSV and JSON for workers 1/4/8")


def run_all(workers: int = 1, skip_slow: bool = False) -> list[CheckResult]:
    results = [
        check_odd_hermite(),
        check_landau_limits(),
        check_zigzag_forms(),
        check_cross_oracle(),
        check_derivatives(),
        check_critical_points(),
        check_monotonicity(),
        check_conductance_integers(),
    ]
    if not skip_slow:
        results.append(check_conductance_integral(workers=workers))
    results.append(check_symmetry())
    results.append(check_determinism())
    return results
