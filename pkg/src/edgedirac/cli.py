"""Command-line front end.

Subcommands: dispersion, zigzag, gap-profile, critical-point, conductance,
symmetry-check, validate.  Ranges use min:max:steps syntax, branch lists
are comma-separated signed labels (+1,-2) or a signed range (-3:3), and
--gamma accepts inf.  Exit codes: 0 success, 1 invariant or validation
failure, 2 usage error.  The worker count comes from --workers or the
EDGEDIRAC_WORKERS environment variable; outputs are byte-identical for
any worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import output, validate
from .conductance import (LevelWindow, conductance_by_integral,
                          conductance_by_limits, default_delta, landau_levels)
from .dirac import assemble_dirac
from .dispersion import critical_point, gap_profile, sweep
from .errors import EdgeDiracError, UsageError
from .grids import auto_domain, make_grid
from .params import Branch, FiberParams, canonicalize, gamma_from_eta
from .tridiag import BACKEND, eigenvalues_by_range, sturm_count


@dataclass
class RunConfig:
    command: str
    params: dict


def parse_gamma(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"--gamma expects a number or 'inf', got {text!r}") from exc


def parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be min:max:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"malformed range {text!r}") from exc
    if not lo < hi or steps < 2:
        raise UsageError(f"range {text!r} needs min < max and steps >= 2")
    return lo, hi, steps


def parse_branches(text: str) -> list[Branch]:
    text = text.strip()
    if ":" in text and "," not in text:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise UsageError(f"branch range {text!r} needs lo <= hi")
        js = [j for j in range(lo, hi + 1) if j != 0]
    else:
        try:
            js = [int(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise UsageError(f"malformed branch list {text!r}") from exc
    if not js or any(j == 0 for j in js):
        raise UsageError("branch indices are nonzero signed integers, e.g. +1,-2")
    return [Branch(1 if j > 0 else -1, abs(j)) for j in js]


def parse_gamma_list(text: str) -> list[float]:
    if ":" in text and "," not in text:
        lo, hi, steps = parse_range(text)
        return [float(v) for v in np.linspace(lo, hi, steps)]
    return [parse_gamma(tok) for tok in text.split(",") if tok.strip()]


def parse_levels(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"malformed level list {text!r}") from exc


def _resolve_gamma(args) -> float:
    if (args.gamma is None) == (args.eta is None):
        raise UsageError("supply exactly one of --gamma or --eta")
    if args.eta is not None:
        return gamma_from_eta(args.eta)
    return parse_gamma(args.gamma)


def _resolve_grid(args, b: float, xi_lo: float, n_max: int):
    if args.grid_L is not None or args.grid_N is not None:
        if args.grid_L is None or args.grid_N is None:
            raise UsageError("--grid-L and --grid-N must be given together")
        return make_grid(args.grid_L, args.grid_N)
    return auto_domain(b, xi_lo, n_max)


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    return max(1, int(os.environ.get("EDGEDIRAC_WORKERS", "1")))


def _write_text(path: str | None, text_writer) -> None:
    """Serialize through text_writer(fh); stdout when path is None."""
    if path is None:
        text_writer(sys.stdout)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            text_writer(fh)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="edgedirac",
        description="Dispersion curves and edge Hall conductance of the "
                    "half-plane magnetic Dirac operator")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, gamma=True):
        p.add_argument("--b", type=float, required=True, help="field strength, nonzero")
        if gamma:
            p.add_argument("--gamma", help="boundary parameter (number or inf)")
            p.add_argument("--eta", type=float,
                           help="boundary angle in [-pi/2, 3pi/2); alternative to --gamma")
        p.add_argument("--grid-L", type=float, help="override truncation length")
        p.add_argument("--grid-N", type=int, help="override subinterval count")
        p.add_argument("--workers", type=int,
                       help="parallel workers (default: EDGEDIRAC_WORKERS or 1)")

    p = sub.add_parser("dispersion", help="sweep dispersion curves")
    add_common(p)
    p.add_argument("--xi", required=True, help="momentum range min:max:steps")
    p.add_argument("--branches", default="-3:3", help="branch list, e.g. +1,-1 or -3:3")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--json", dest="json_path", help="JSON path")
    p.add_argument("--svg", dest="svg_path", help="SVG path")

    p = sub.add_parser("zigzag", help="dispersion restricted to gamma in {0, inf}")
    add_common(p)
    p.add_argument("--xi", required=True)
    p.add_argument("--branches", default="-3:3")
    p.add_argument("--out")
    p.add_argument("--json", dest="json_path")
    p.add_argument("--svg", dest="svg_path")

    p = sub.add_parser("gap-profile", help="maximal negative energy vs gamma")
    add_common(p, gamma=False)
    p.add_argument("--gammas", required=True, help="gamma list or range min:max:steps")
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("critical-point", help="minimizer of a negative branch")
    add_common(p, gamma=False)
    p.add_argument("--gammas", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("conductance", help="edge Hall conductance for a level window")
    add_common(p)
    p.add_argument("--levels", required=True, help="signed level indices, e.g. -1,0,1")
    p.add_argument("--delta", type=float, help="bump half-width (default: auto)")
    p.add_argument("--xi-width", type=float, help="momentum half-width Xi")
    p.add_argument("--xi-step", type=float, default=None)
    p.add_argument("--j-max", type=int)
    p.add_argument("--no-integral", action="store_true",
                   help="skip the spectral-flow quadrature")
    p.add_argument("--json", dest="json_path", help="JSON path (default: stdout)")

    p = sub.add_parser("symmetry-check",
                       help="compare direct and canonicalized fiber spectra")
    add_common(p)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--k", type=int, default=6, help="eigenvalues nearest zero")
    p.add_argument("--json", dest="json_path")

    p = sub.add_parser("validate", help="run the full invariant suite")
    p.add_argument("--workers", type=int)
    p.add_argument("--skip-slow", action="store_true",
                   help="skip the spectral-flow quadrature checks")
    return ap


def _cmd_dispersion(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    gamma = _resolve_gamma(a)
    if cfg.command == "zigzag" and not (gamma == 0 or math.isinf(gamma)):
        raise UsageError("zigzag expects --gamma 0 or inf")
    xi_lo, xi_hi, steps = parse_range(a.xi)
    branches = parse_branches(a.branches)
    can, _ = canonicalize(FiberParams(a.b, gamma, 0.0))
    grid = _resolve_grid(a, can.b, min(-abs(xi_lo), -abs(xi_hi)),
                         max(br.n for br in branches) + 1)
    curves = sweep(gamma, a.b, xi_lo, xi_hi, steps, branches,
                   workers=_workers(a), grid=grid)
    _write_text(a.out, lambda fh: output.write_curves_csv(fh, curves))
    if a.json_path:
        payload = output.curves_payload(curves)
        _write_text(a.json_path, lambda fh: output.write_json(fh, payload))
    if a.svg_path:
        levels = landau_levels(a.b, max(br.n for br in branches))
        _write_text(a.svg_path, lambda fh: output.write_curves_svg(fh, curves, levels))
    return 0


def _cmd_gap_profile(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    gammas = parse_gamma_list(a.gammas)
    grid = _resolve_grid(a, abs(a.b), -8.0 * math.sqrt(abs(a.b)), 2)
    rows = gap_profile(abs(a.b), gammas, grid)
    _write_text(a.out, lambda fh: output.write_table_csv(
        fh, ["gamma", "max_negative_energy"], rows))
    return 0


def _cmd_critical_point(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    gammas = parse_gamma_list(a.gammas)
    grid = _resolve_grid(a, abs(a.b), -8.0 * math.sqrt(abs(a.b)), a.n + 1)
    rows = []
    for gamma in gammas:
        xi_star, th_star = critical_point(gamma, abs(a.b), a.n, grid)
        rows.append((gamma, xi_star, th_star))
    _write_text(a.out, lambda fh: output.write_table_csv(
        fh, ["gamma", "xi_star", "theta_star"], rows))
    return 0


def _cmd_conductance(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    gamma = _resolve_gamma(a)
    selected = parse_levels(a.levels)
    delta = a.delta if a.delta is not None else default_delta(a.b, selected)
    window = LevelWindow(a.b, selected, delta)
    if a.no_integral:
        report = conductance_by_limits(gamma, a.b, window)
    else:
        grid = None
        if a.grid_L is not None:
            grid = _resolve_grid(a, abs(a.b), 0.0, 1)
        kwargs = {}
        if a.xi_step is not None:
            kwargs["xi_step"] = a.xi_step
        report = conductance_by_integral(gamma, a.b, window, Xi=a.xi_width,
                                         j_max=a.j_max, g=grid,
                                         workers=_workers(a), **kwargs)
    payload = output.conductance_payload(report)
    _write_text(a.json_path, lambda fh: output.write_json(fh, payload))
    return 0


def _cmd_symmetry_check(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    gamma = _resolve_gamma(a)
    fp = FiberParams(a.b, gamma, a.xi)
    can, transform = canonicalize(fp)
    grid = _resolve_grid(a, can.b, -abs(a.xi) - 4.0, a.k + 1)
    direct = _near_zero_spectrum(fp, grid, a.k)
    canonical = _near_zero_spectrum(can, grid, a.k)
    mapped = np.sort(transform.map_value(canonical))
    deviation = float(np.max(np.abs(np.sort(direct) - mapped)))
    payload = {
        "max_deviation": deviation,
        "transform": transform.as_dict(),
        "canonical": {"b": can.b, "gamma": output._json_num(can.gamma), "xi": can.xi},
        "spectrum_direct": [float(v) for v in np.sort(direct)],
        "spectrum_via_canonical": [float(v) for v in mapped],
    }
    _write_text(a.json_path, lambda fh: output.write_json(fh, payload))
    return 0 if deviation <= 1e-6 else 1


def _near_zero_spectrum(fp: FiberParams, grid, k: int) -> np.ndarray:
    T = assemble_dirac(fp, grid).tridiag
    below = sturm_count(T, 0.0)
    k0 = max(0, below - k)
    k1 = min(T.dim - 1, below + k - 1)
    vals = eigenvalues_by_range(T, k0, k1)
    order = np.argsort(np.abs(vals), kind="stable")
    return vals[order[:k]]


def _cmd_validate(cfg: RunConfig) -> int:
    a = cfg.params["args"]
    workers = max(1, a.workers if a.workers is not None
                  else int(os.environ.get("EDGEDIRAC_WORKERS", "1")))
    results = validate.run_all(workers=workers, skip_slow=a.skip_slow)
    width = max(len(r.name) for r in results)
    print(f"backend: {BACKEND}")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    ok = all(r.passed for r in results)
    print(f"{'all checks passed' if ok else 'FAILURES present'}")
    return 0 if ok else 1


_COMMANDS = {
    "dispersion": _cmd_dispersion,
    "zigzag": _cmd_dispersion,
    "gap-profile": _cmd_gap_profile,
    "critical-point": _cmd_critical_point,
    "conductance": _cmd_conductance,
    "symmetry-check": _cmd_symmetry_check,
    "validate": _cmd_validate,
}


def dispatch(cfg: RunConfig) -> int:
    return _COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return dispatch(RunConfig(args.command, {"args": args}))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except EdgeDiracError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
