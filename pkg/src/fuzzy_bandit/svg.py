"""Minimal standalone SVG line charts, emitted as plain text.

Deliberately dependency-free: results land in version control and CI
artifacts, where a standalone well-formed SVG beats a plotting stack.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_chart"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#17becf", "#e377c2", "#7f7f7f", "#bcbd22")

_MARGIN_LEFT = 72
_MARGIN_RIGHT = 24
_MARGIN_TOP = 42
_MARGIN_BOTTOM = 58


def _span(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        return lo, hi
    pad = max(1.0, abs(lo))  # degenerate range: pad to something drawable
    return lo - pad, hi + pad


def _fmt_tick(v: float) -> str:
    return f"{v:g}"


def line_chart(series, title: str = "", x_label: str = "", y_label: str = "",
               width: int = 840, height: int = 520) -> str:
    """Render ``series`` = [(name, xs, ys), ...] as one polyline each,
    with axes, tick labels and a legend.  Returns the SVG document text.
    """
    if not series:
        raise ValueError("need at least one series")
    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    if all_x.size == 0:
        raise ValueError("series must contain at least one point")
    x0, x1 = _span(float(all_x.min()), float(all_x.max()))
    y0, y1 = _span(float(all_y.min()), float(all_y.max()))

    def px(x):
        return _MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w

    def py(y):
        return _MARGIN_TOP + plot_h - (y - y0) / (y1 - y0) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{escape(title)}</text>'
        )

    # axes
    ax_y = _MARGIN_TOP + plot_h
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{ax_y}" x2="{_MARGIN_LEFT + plot_w}" y2="{ax_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" y2="{ax_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    for v in np.linspace(x0, x1, 6):
        x = px(v)
        out.append(f'<line x1="{x:.2f}" y1="{ax_y}" x2="{x:.2f}" y2="{ax_y + 5}" stroke="black"/>')
        out.append(
            f'<text x="{x:.2f}" y="{ax_y + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_fmt_tick(v)}</text>'
        )
    for v in np.linspace(y0, y1, 6):
        y = py(v)
        out.append(f'<line x1="{_MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{_MARGIN_LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{_MARGIN_LEFT - 9}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{_fmt_tick(v)}</text>'
        )
    if x_label:
        out.append(
            f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" y="{height - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{escape(x_label)}</text>'
        )
    if y_label:
        cx, cy = 20, _MARGIN_TOP + plot_h / 2
        out.append(
            f'<text x="{cx}" y="{cy:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" '
            f'transform="rotate(-90 {cx} {cy:.1f})">{escape(y_label)}</text>'
        )

    # series + legend
    for i, (name, xs, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        ly = _MARGIN_TOP + 14 + 18 * i
        lx = _MARGIN_LEFT + plot_w - 210
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{escape(str(name))}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
