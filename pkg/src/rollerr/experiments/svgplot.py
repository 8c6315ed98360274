"""Standalone SVG rendering of error-profile curves.

Log-scale per-step error with a median line and shaded percentile bands,
one series per value of a grouping column -- the paper-figure look, with no
plotting dependency. Output is a single self-contained SVG file, written
atomically (no partial file survives an error).
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

PALETTE = ["#0000c8", "#8c148c", "#00c800", "#c80000", "#eb7518",
           "#0a0a0a", "#11a0a0", "#b8a000"]

FLOOR = 1e-16  # log-scale clamp for zero/negative values


class PlotError(ValueError):
    pass


@dataclass
class PlotSpec:
    out_path: str
    series_by: str = "model"
    filters: dict = field(default_factory=dict)
    series: list | None = None  # explicit series values; error if missing
    title: str = ""
    x_col: str = "step"
    x_label: str = "prediction step"
    y_label: str = "normalized per-step MSE"
    width: int = 720
    height: int = 480


def read_series(results_csv, spec: PlotSpec):
    """Group filtered CSV rows into {series value: (x, p50, p65, p95)}."""
    groups = {}
    with open(results_csv) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or spec.x_col not in reader.fieldnames:
            raise PlotError(f"{results_csv} has no {spec.x_col!r} column")
        if spec.series_by not in reader.fieldnames:
            raise PlotError(f"no {spec.series_by!r} column to group by")
        for row in reader:
            if any(row.get(k, "") != v for k, v in spec.filters.items()):
                continue
            key = row[spec.series_by]
            groups.setdefault(key, []).append(
                (float(row[spec.x_col]), float(row["p50"]),
                 float(row["p65"]), float(row["p95"])))
    if spec.series is not None:
        missing = [s for s in spec.series if s not in groups]
        if missing:
            raise PlotError(f"requested series not in results: {missing}")
        groups = {k: groups[k] for k in spec.series}
    if not groups:
        raise PlotError("no rows left after filtering")
    return {k: np.array(sorted(v)) for k, v in sorted(groups.items())}


def _ticks_log(lo_exp, hi_exp):
    span = hi_exp - lo_exp
    step = 1 if span <= 8 else int(np.ceil(span / 8))
    return list(range(lo_exp, hi_exp + 1, step))


def _ticks_linear(lo, hi, n=6):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    step = mag * min(s for s in (1, 2, 5, 10) if mag * s >= raw)
    start = np.ceil(lo / step) * step
    return list(np.arange(start, hi + step / 2, step))


def _fmt(x):
    return f"{x:.6g}"


def emit_plot(results_csv, spec: PlotSpec):
    """Render the spec to a standalone SVG file; returns the output path."""
    groups = read_series(results_csv, spec)

    margin_l, margin_r, margin_t, margin_b = 64, 150, 42, 48
    pw = spec.width - margin_l - margin_r
    ph = spec.height - margin_t - margin_b

    all_x = np.concatenate([g[:, 0] for g in groups.values()])
    all_y = np.concatenate([g[:, 1:].ravel() for g in groups.values()])
    all_y = np.maximum(all_y, FLOOR)
    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    e_lo = int(np.floor(np.log10(all_y.min())))
    e_hi = int(np.ceil(np.log10(all_y.max())))
    if e_hi == e_lo:
        e_hi += 1

    def sx(x):
        return margin_l + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        ly = np.log10(max(y, FLOOR))
        return margin_t + (e_hi - ly) / (e_hi - e_lo) * ph

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">')
    parts.append("<defs><clipPath id=\"plot-area\">"
                 f"<rect x=\"{margin_l}\" y=\"{margin_t}\" width=\"{pw}\" "
                 f"height=\"{ph}\"/></clipPath></defs>")
    parts.append(f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>')

    # gridlines and axis ticks
    for exp in _ticks_log(e_lo, e_hi):
        y = sy(10.0 ** exp)
        parts.append(f'<line x1="{margin_l}" y1="{_fmt(y)}" '
                     f'x2="{margin_l + pw}" y2="{_fmt(y)}" '
                     'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{margin_l - 8}" y="{_fmt(y + 4)}" '
                     'text-anchor="end" font-size="11" font-family="sans-serif">'
                     f'1e{exp}</text>')
    for x in _ticks_linear(x_lo, x_hi):
        parts.append(f'<line x1="{_fmt(sx(x))}" y1="{margin_t + ph}" '
                     f'x2="{_fmt(sx(x))}" y2="{margin_t + ph + 5}" '
                     'stroke="#333333" stroke-width="1"/>')
        parts.append(f'<text x="{_fmt(sx(x))}" y="{margin_t + ph + 18}" '
                     'text-anchor="middle" font-size="11" '
                     f'font-family="sans-serif">{x:g}</text>')

    # frame and labels
    parts.append(f'<rect x="{margin_l}" y="{margin_t}" width="{pw}" height="{ph}" '
                 'fill="none" stroke="#333333" stroke-width="1"/>')
    parts.append(f'<text x="{margin_l + pw / 2}" y="{spec.height - 12}" '
                 'text-anchor="middle" font-size="13" font-family="sans-serif">'
                 f'{spec.x_label}</text>')
    parts.append(f'<text x="16" y="{margin_t + ph / 2}" text-anchor="middle" '
                 'font-size="13" font-family="sans-serif" '
                 f'transform="rotate(-90 16 {margin_t + ph / 2})">'
                 f'{spec.y_label}</text>')
    if spec.title:
        parts.append(f'<text x="{margin_l + pw / 2}" y="24" text-anchor="middle" '
                     f'font-size="15" font-family="sans-serif">{spec.title}</text>')

    # series: shaded bands + median line (or marker when a single point)
    for i, (name, data) in enumerate(groups.items()):
        color = PALETTE[i % len(PALETTE)]
        xs, p50, p65, p95 = data.T
        if len(xs) == 1:
            parts.append(f'<circle cx="{_fmt(sx(xs[0]))}" cy="{_fmt(sy(p50[0]))}" '
                         f'r="4" fill="{color}"/>')
        else:
            for hi_vals, opacity in ((p95, 0.15), (p65, 0.30)):
                upper = "".join(f"{_fmt(sx(x))},{_fmt(sy(y))} "
                                for x, y in zip(xs, hi_vals))
                lower = "".join(f"{_fmt(sx(x))},{_fmt(sy(y))} "
                                for x, y in zip(xs[::-1], p50[::-1]))
                parts.append(f'<polygon points="{upper}{lower}" fill="{color}" '
                             f'opacity="{opacity}" clip-path="url(#plot-area)"/>')
            line = "".join(f"{_fmt(sx(x))},{_fmt(sy(y))} " for x, y in zip(xs, p50))
            parts.append(f'<polyline points="{line}" fill="none" stroke="{color}" '
                         f'stroke-width="1.8" clip-path="url(#plot-area)"/>')
        # legend entry
        ly = margin_t + 14 + 18 * i
        lx = margin_l + pw + 12
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="3"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly + 4}" font-size="11" '
                     f'font-family="sans-serif">{name}</text>')

    parts.append("</svg>")
    payload = "\n".join(parts) + "\n"

    tmp = str(spec.out_path) + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(payload)
    os.replace(tmp, spec.out_path)
    return spec.out_path
