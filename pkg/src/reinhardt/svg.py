"""Minimal static SVG line plots (deterministic text output, no plotting backend)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def line_plot(path, series, title: str = "", xlabel: str = "", ylabel: str = "",
              size: int = 480, margin: int = 50) -> None:
    """``series`` is a list of ``(label, xs, ys)``; non-finite points split polylines."""
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 - x0 < 1e-12:
        x0, x1 = x0 - 1, x1 + 1
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1, y1 + 1
    w = size - 2 * margin

    def X(x):
        return margin + (x - x0) / (x1 - x0) * w

    def Y(y):
        return size - margin - (y - y0) / (y1 - y0) * w

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{margin}" y="{margin}" width="{w}" height="{w}" fill="none" stroke="#999"/>',
        f'<text x="{size / 2}" y="{margin / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{size / 2}" y="{size - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="12" y="{size / 2}" font-size="12" transform="rotate(-90 12 {size / 2})">{escape(ylabel)}</text>',
        f'<text x="{margin}" y="{size - margin + 15}" font-size="10">{x0:.3g}</text>',
        f'<text x="{size - margin}" y="{size - margin + 15}" font-size="10" text-anchor="end">{x1:.3g}</text>',
        f'<text x="{margin - 4}" y="{size - margin}" font-size="10" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{margin - 4}" y="{margin + 10}" font-size="10" text-anchor="end">{y1:.3g}</text>',
    ]
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        run: list[str] = []
        runs = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                run.append(f"{_fmt(X(x))},{_fmt(Y(y))}")
            elif run:
                runs.append(run)
                run = []
        if run:
            runs.append(run)
        for r in runs:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(r)}"/>')
        out.append(
            f'<text x="{size - margin - 4}" y="{margin + 14 * (i + 1)}" font-size="11" '
            f'text-anchor="end" fill="{color}">{escape(label)}</text>'
        )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
