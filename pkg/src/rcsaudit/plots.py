"""Minimal standalone SVG scatter plots with the plotted data embedded as comments."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT, MARGIN = 480, 320, 50


def _ticks(lo: float, hi: float, k: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + i * (hi - lo) / (k - 1) for i in range(k)]


def scatter_svg(
    series: dict[str, Sequence[tuple[float, float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    line: tuple[float, float] | None = None,
) -> str:
    """``series`` maps a label to points; ``line`` is an optional ``(slope, intercept)`` overlay."""
    pts = [p for s in series.values() for p in s]
    if not pts:
        raise ValueError("nothing to plot")
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y0 == y1:
        pad = abs(y0) * 0.05 or 0.05
        y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<!-- title: {escape(title)} -->",
    ]
    for label, s in series.items():
        data = " ".join(f"{x:.10g},{y:.10g}" for x, y in s)
        out.append(f"<!-- data {escape(label)}: {data} -->")
    out += [
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="15" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {HEIGHT / 2})">{escape(ylabel)}</text>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.1f}" y="{HEIGHT - MARGIN + 15}" text-anchor="middle" font-size="10">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN - 5}" y="{sy(t) + 3:.1f}" text-anchor="end" font-size="10">{t:.4g}</text>')
    for i, (label, s) in enumerate(series.items()):
        c = colors[i % len(colors)]
        for x, y in s:
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{c}"/>')
        out.append(f'<text x="{WIDTH - MARGIN}" y="{MARGIN + 14 * i}" text-anchor="end" font-size="11" fill="{c}">{escape(label)}</text>')
    if line is not None:
        slope, intercept = line
        out.append(
            f'<line x1="{sx(x0):.2f}" y1="{sy(intercept + slope * x0):.2f}" '
            f'x2="{sx(x1):.2f}" y2="{sy(intercept + slope * x1):.2f}" stroke="gray" stroke-dasharray="4"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
