"""CSV, JSON and SVG emission.

CSV is the primary interchange format; floats carry 17 significant digits
so files round-trip exactly.  JSON mirrors every field of the reports,
with an explicit "inf"/"-inf" encoding since JSON has no infinities.  SVG
plots are minimal static line charts with dashed horizontal lines at the
Landau levels; all coordinates are formatted with fixed precision so
identical data produces identical bytes.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable

from .conductance import ConductanceReport, landau_levels
from .dispersion import DispersionCurve
from .params import SymmetryTransform


def fmt(v: float) -> str:
    return f"{v:.17g}"


def _json_num(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _parse_num(v):
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return v


def write_curves_csv(fh: IO[str], curves: Iterable[DispersionCurve]) -> None:
    """Schema: xi,branch,lambda,dlambda_dxi; one row per sample, branch
    encoded +n/-n, lambda signed by the branch."""
    fh.write("xi,branch,lambda,dlambda_dxi\n")
    for cv in curves:
        label = cv.branch.label
        signed = cv.signed_values()
        for x, lam, sl in zip(cv.xis, signed, cv.slopes):
            fh.write(f"{fmt(x)},{label},{fmt(lam)},{fmt(sl)}\n")


def curves_payload(curves: list[DispersionCurve],
                   transform: SymmetryTransform | None = None) -> dict:
    gamma = curves[0].gamma if curves else math.nan
    b = curves[0].b if curves else math.nan
    payload = {
        "gamma": _json_num(gamma),
        "b": b,
        "curves": [
            {
                "branch": cv.branch.label,
                "limit_minus_inf": _json_num(cv.limit_minus_inf),
                "xi": [float(x) for x in cv.xis],
                "lambda": [float(v) for v in cv.signed_values()],
                "dlambda_dxi": [float(s) for s in cv.slopes],
            }
            for cv in curves
        ],
    }
    if transform is not None:
        payload["transform"] = transform.as_dict()
    return payload


def write_json(fh: IO[str], payload: dict) -> None:
    json.dump(payload, fh, indent=2, sort_keys=True)
    fh.write("\n")


def conductance_payload(report: ConductanceReport) -> dict:
    params = {k: _json_num(v) if isinstance(v, float) else v
              for k, v in report.params.items()}
    return {
        "integer": report.integer_value,
        "integral": report.integral_value,
        "per_curve": [list(entry) for entry in report.per_curve],
        "params": params,
    }


def parse_conductance_payload(payload: dict) -> ConductanceReport:
    params = {k: _parse_num(v) for k, v in payload["params"].items()}
    return ConductanceReport(
        int(payload["integer"]),
        payload["integral"],
        [tuple(entry) for entry in payload["per_curve"]],
        params,
    )


def write_table_csv(fh: IO[str], header: list[str], rows: Iterable[tuple]) -> None:
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


# --- SVG -------------------------------------------------------------------

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf"]
_W, _H, _M = 800, 560, 56


def _coord(x, lo, hi, pix_lo, pix_hi):
    t = 0.5 if hi == lo else (x - lo) / (hi - lo)
    return pix_lo + t * (pix_hi - pix_lo)


def write_curves_svg(fh: IO[str], curves: list[DispersionCurve],
                     levels: list[float] | None = None) -> None:
    """One polyline per branch over dashed Landau-level guide lines."""
    if levels is None and curves:
        levels = landau_levels(curves[0].b, max(cv.branch.n for cv in curves))
    levels = levels or []
    xs = [float(x) for cv in curves for x in cv.xis]
    ys = [float(v) for cv in curves for v in cv.signed_values()]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    pad = 0.05 * max(y_hi - y_lo, 1e-9)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x):
        return _coord(x, x_lo, x_hi, _M, _W - _M)

    def py(y):
        return _coord(y, y_lo, y_hi, _H - _M, _M)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    for lv in levels:
        if y_lo <= lv <= y_hi:
            parts.append(
                f'<line x1="{px(x_lo):.2f}" y1="{py(lv):.2f}" x2="{px(x_hi):.2f}" '
                f'y2="{py(lv):.2f}" stroke="#999999" stroke-dasharray="6,4" '
                f'stroke-width="1"/>')
    # axes box and extremal tick labels
    parts.append(
        f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" '
        f'fill="none" stroke="black" stroke-width="1"/>')
    parts.append(f'<text x="{_M}" y="{_H - _M + 18}" font-size="12">{x_lo:g}</text>')
    parts.append(f'<text x="{_W - _M}" y="{_H - _M + 18}" font-size="12" '
                 f'text-anchor="end">{x_hi:g}</text>')
    parts.append(f'<text x="{_M - 6}" y="{_H - _M}" font-size="12" '
                 f'text-anchor="end">{y_lo:.3g}</text>')
    parts.append(f'<text x="{_M - 6}" y="{_M + 4}" font-size="12" '
                 f'text-anchor="end">{y_hi:.3g}</text>')
    for i, cv in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(float(x)):.2f},{py(float(v)):.2f}"
                       for x, v in zip(cv.xis, cv.signed_values()))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        y0 = py(float(cv.signed_values()[-1]))
        parts.append(f'<text x="{_W - _M + 4}" y="{y0:.2f}" font-size="12" '
                     f'fill="{color}">{cv.branch.label}</text>')
    parts.append("</svg>")
    fh.write("\n".join(parts) + "\n")
