"""Curve CSV, plain-text summary and SVG plot for a :class:`GcReport`."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .config import Direction
from .pipeline import GcReport
from .spectral import CoherenceCurve

CSV_COLUMNS = ("lambda", "period_months", "h_granger", "crit_granger", "significant", "band")

# plot box in SVG user units
WIDTH, HEIGHT = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 30, 50


def _g(v: float) -> str:
    return f"{v:.10g}"


def _suffix(direction: Direction, both: bool) -> str:
    if not both:
        return ""
    return "_x_to_y" if direction is Direction.X_TO_Y else "_y_to_x"


def curve_rows(curve: CoherenceCurve) -> list:
    sig = curve.significant_granger
    bands = curve.bands
    return [
        [_g(lam), _g(per), _g(h), _g(curve.crit_granger), "true" if s else "false", b]
        for lam, per, h, s, b in zip(curve.frequencies, curve.period_months,
                                     curve.h_granger, sig, bands)
    ]


def write_curve_csv(curve: CoherenceCurve, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(curve_rows(curve))
    return path


def _stars(res) -> str:
    cv = res.critical_values
    if res.statistic < cv[0.01]:
        return "***"
    if res.statistic < cv[0.05]:
        return "**"
    if res.statistic < cv[0.10]:
        return "*"
    return ""


def unit_root_table(report: GcReport) -> str:
    trends = list(report.unit_roots[0].adf)
    width = max(12, *(len(u.name) + 2 for u in report.unit_roots))
    head1 = " " * width + f"{'ADF':<34}{'PP':<34}"
    head2 = " " * width + "".join(f"{t.label:<17}" for t in trends * 2)
    lines = [head1.rstrip(), head2.rstrip()]
    for ur in report.unit_roots:
        cells = [f"{r.statistic:.3f}({r.selected_lag}){_stars(r)}" for r in (ur.adf[t] for t in trends)]
        cells += [f"{r.statistic:.3f}({r.bandwidth}){_stars(r)}" for r in (ur.pp[t] for t in trends)]
        lines.append(f"{ur.name:<{width}}" + "".join(f"{c:<17}" for c in cells).rstrip())
    lines.append("Notes: *, ** and *** mark rejection of a unit root at 10%, 5% and 1%. "
                 "Parentheses: SIC lag (ADF), Newey-West bandwidth (PP).")
    return "\n".join(lines)


def summary_text(report: GcReport) -> str:
    s = report.sizes
    cfg = report.config
    out = [
        f"Frequency-domain Granger causality: {report.x_name} vs {report.y_name}",
        f"Sample: {report.start}..{report.end} (T = {report.T})",
        "",
        "Unit-root tests",
        unit_root_table(report),
        "",
        "ARMA prewhitening (CSS, BIC order search unless overridden)",
    ]
    for key, name in (("x", report.x_name), ("y", report.y_name)):
        m = report.models[key]
        ar = ", ".join(f"{c:.4f}" for c in m.ar_coefficients) or "-"
        ma = ", ".join(f"{c:.4f}" for c in m.ma_coefficients) or "-"
        out.append(f"  {name}: ARMA({m.p},{m.q}) mean={m.mean:.6g} AR=[{ar}] MA=[{ma}] "
                   f"sigma2={m.innovation_variance:.6g} BIC={m.information_criterion:.3f}")
    out += [
        "",
        f"Lag window: Bartlett, M = {s.M}",
        f"Effective sample sizes: n = {s.n:.4f}, n' = {s.n_prime:.4f}",
        f"alpha = {cfg.alpha:g}",
    ]
    for r in report.results:
        c = r.curve
        out += [
            "",
            f"Direction {c.label}",
            f"  Granger-coherence critical value: {c.crit_granger:.4f}",
        ]
        if c.crit_full is not None:
            out.append(f"  Coherence critical value: {c.crit_full:.4f}")
        for band, desc in ((r.bands.long, f"long-term  (lambda <= {r.bands.split:g})"),
                           (r.bands.short, f"short-term (lambda >  {r.bands.split:g})")):
            out.append(f"  {desc}: {band.significant}/{band.points} significant -> {band.verdict}")
    out += ["", "Warnings"]
    out += [f"  - {w}" for w in report.warnings] or ["  none"]
    out += ["", "Provenance", json.dumps(report.provenance, indent=2, sort_keys=True)]
    return "\n".join(out) + "\n"


def _ymax(curve: CoherenceCurve) -> float:
    top = max(float(np.max(curve.h_granger)), curve.crit_granger)
    return max(1.0, math.ceil(top * 10) / 10)


def svg_plot(curve: CoherenceCurve) -> str:
    """Line plot of Granger coherence against frequency with the critical value dashed."""
    ymax = _ymax(curve)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(lam):
        return LEFT + pw * lam / math.pi

    def py(h):
        return TOP + ph * (1 - h / ymax)

    pts = " ".join(f"{px(l):.4f},{py(h):.4f}" for l, h in zip(curve.frequencies, curve.h_granger))
    crit_y = py(curve.crit_granger)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(curve.label)}</title>",
        f'<g id="plot" data-left="{LEFT}" data-top="{TOP}" data-width="{pw}" '
        f'data-height="{ph}" data-xmax="{_g(math.pi)}" data-ymax="{_g(ymax)}">',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        lam = i * math.pi / 4
        label = ["0", "π/4", "π/2", "3π/4", "π"][i]
        parts.append(f'<line x1="{px(lam):.2f}" y1="{TOP + ph}" x2="{px(lam):.2f}" '
                     f'y2="{TOP + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{px(lam):.2f}" y="{TOP + ph + 18}" text-anchor="middle">{label}</text>')
    ticks = np.linspace(0, ymax, int(round(ymax / 0.2)) + 1)
    for t in ticks:
        parts.append(f'<line x1="{LEFT - 5}" y1="{py(t):.2f}" x2="{LEFT}" y2="{py(t):.2f}" stroke="black"/>')
        parts.append(f'<text x="{LEFT - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:.1f}</text>')
    parts += [
        f'<line id="critical" x1="{LEFT}" y1="{crit_y:.4f}" x2="{LEFT + pw}" y2="{crit_y:.4f}" '
        f'stroke="black" stroke-dasharray="6,4" data-value="{_g(curve.crit_granger)}"/>',
        f'<polyline id="curve" fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>',
        "</g>",
        f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">frequency λ</text>',
        f'<text x="15" y="{TOP + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {TOP + ph / 2})">Granger coefficient of coherence</text>',
        f'<text x="{LEFT}" y="{TOP - 10}">{escape(curve.label)}: M={curve.M}, T={curve.T}, '
        f'dashed = {curve.alpha:g} critical value ({curve.crit_granger:.4f})</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def emit_report(report: GcReport, out_dir, svg: bool = True) -> list:
    """Write curve CSV(s), ``summary.txt`` and optional SVG plot(s); return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    both = len(report.results) > 1
    written = []
    for r in report.results:
        sfx = _suffix(r.direction, both)
        written.append(write_curve_csv(r.curve, out / f"curve{sfx}.csv"))
        if svg:
            p = out / f"curve{sfx}.svg"
            p.write_text(svg_plot(r.curve), encoding="utf-8")
            written.append(p)
    p = out / "summary.txt"
    p.write_text(summary_text(report), encoding="utf-8")
    written.append(p)
    return written
