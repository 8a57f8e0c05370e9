"""ASCII and SVG renderings of Ext charts.

The ASCII grid has filtration increasing upward and stems along the
bottom; cells show the dimension (``.`` for zero).  The SVG output is
plain text: a grid of dots with line segments for the h_0/h_1/h_2
products, no external machinery.  A rendered chart keeps the JSON form
of the chart beside the pictures so it round-trips losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .resolution import ExtChart, chart_from_json


@dataclass(frozen=True)
class RenderedChart:
    ascii_text: str
    svg_text: str
    chart_json: dict

    def restore(self) -> ExtChart:
        return chart_from_json(self.chart_json)


def _stem_range(chart: ExtChart) -> tuple[int, int]:
    stems = [t - s for (s, t), d in chart.dims.items() if d]
    if not stems:
        return (0, 0)
    return min(stems), max(stems)


def ascii_chart(chart: ExtChart, stem_window: tuple[int, int] | None = None,
                max_s: int | None = None, show_labels: bool = False) -> str:
    lo, hi = stem_window or _stem_range(chart)
    top = max_s if max_s is not None else max(
        (s for (s, t), d in chart.dims.items() if d and lo <= t - s <= hi), default=0)
    width = max(3, len(str(hi)) + 1)
    lines = []
    for s in range(top, -1, -1):
        row = [f"{s:>3} |"]
        for c in range(lo, hi + 1):
            d = chart.dim(s, c + s)
            row.append(f"{d if d else '.':>{width}}")
        lines.append("".join(row))
    lines.append("    +" + "-" * (width * (hi - lo + 1)))
    lines.append("     " + "".join(f"{c:>{width}}" for c in range(lo, hi + 1)))
    if show_labels:
        lines.append("")
        for (s, t) in sorted(chart.labels):
            if lo <= t - s <= hi and s <= top:
                for lbl in chart.labels[(s, t)]:
                    lines.append(f"  ({t - s}, s={s}): {lbl}")
    for note in chart.annotations:
        lines.append(f"  note: {note}")
    return "\n".join(lines)


def svg_chart(chart: ExtChart, stem_window: tuple[int, int] | None = None,
              max_s: int | None = None) -> str:
    lo, hi = stem_window or _stem_range(chart)
    top = max_s if max_s is not None else max(
        (s for (s, t), d in chart.dims.items() if d and lo <= t - s <= hi), default=0)
    cell = 28
    pad = 36
    w = pad * 2 + cell * (hi - lo + 1)
    h = pad * 2 + cell * (top + 1)

    def xy(stem: int, s: int, i: int = 0, d: int = 1) -> tuple[float, float]:
        x = pad + (stem - lo) * cell + cell / 2 + (i - (d - 1) / 2) * 7
        y = h - pad - s * cell - cell / 2
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    for a, b in (edge for k in sorted(chart.products) for edge in chart.products[k]):
        (s1, t1, i1), (s2, t2, i2) = a, b
        if not (lo <= t1 - s1 <= hi and lo <= t2 - s2 <= hi and s2 <= top):
            continue
        x1, y1 = xy(t1 - s1, s1, i1, chart.dim(s1, t1))
        x2, y2 = xy(t2 - s2, s2, i2, chart.dim(s2, t2))
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="black" stroke-width="1"/>')
    for s in range(top + 1):
        for c in range(lo, hi + 1):
            d = chart.dim(s, c + s)
            for i in range(d):
                x, y = xy(c, s, i, d)
                parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="black"/>')
    for c in range(lo, hi + 1):
        x, _ = xy(c, 0)
        parts.append(f'<text x="{x:.1f}" y="{h - 10}" font-size="11" '
                     f'text-anchor="middle">{c}</text>')
    for s in range(top + 1):
        _, y = xy(lo, s)
        parts.append(f'<text x="12" y="{y + 4:.1f}" font-size="11">{s}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def render(chart: ExtChart, stem_window: tuple[int, int] | None = None,
           max_s: int | None = None, show_labels: bool = True) -> RenderedChart:
    return RenderedChart(
        ascii_text=ascii_chart(chart, stem_window, max_s, show_labels),
        svg_text=svg_chart(chart, stem_window, max_s),
        chart_json=chart.to_json())
