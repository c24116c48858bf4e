"""Tiny deterministic SVG line charts.

These renderings are a convenience view of curve CSVs; the CSV files are the
normative output. Everything is emitted with fixed formatting and no
timestamps or library version strings, so identical inputs give
byte-identical SVG.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError

_WIDTH = 480
_HEIGHT = 320
_MARGIN_LEFT = 56
_MARGIN_RIGHT = 16
_MARGIN_TOP = 32
_MARGIN_BOTTOM = 44


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def svg_line_chart(
    points,
    title: str,
    x_label: str,
    y_label: str,
    diagonal: bool = False,
) -> str:
    """Render (x, y) samples as a single-series SVG line chart.

    With ``diagonal=True`` a dashed y = x reference line is drawn across the
    data range (useful when the interesting feature is departure from the
    identity).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise InputError("points must be an (n, 2) array with n >= 2")
    if not np.all(np.isfinite(pts)):
        raise InputError("points must be finite")

    x, y = pts[:, 0], pts[:, 1]
    x_min, x_max = float(x.min()), float(x.max())
    y_min, y_max = float(y.min()), float(y.max())
    if x_max == x_min:
        x_max = x_min + 1.0
    if y_max == y_min:
        y_max = y_min + 1.0

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(v: float) -> float:
        return _MARGIN_LEFT + (v - x_min) / (x_max - x_min) * plot_w

    def py(v: float) -> float:
        return _MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h

    path = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:g}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        # axes
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{_HEIGHT - _MARGIN_BOTTOM}" stroke="black" stroke-width="1"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_HEIGHT - _MARGIN_BOTTOM}" '
        f'x2="{_WIDTH - _MARGIN_RIGHT}" y2="{_HEIGHT - _MARGIN_BOTTOM}" '
        f'stroke="black" stroke-width="1"/>',
        # range labels
        f'<text x="{_MARGIN_LEFT}" y="{_HEIGHT - _MARGIN_BOTTOM + 16}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="10">{_fmt(x_min)}</text>',
        f'<text x="{_WIDTH - _MARGIN_RIGHT}" y="{_HEIGHT - _MARGIN_BOTTOM + 16}" '
        f'text-anchor="end" font-family="sans-serif" font-size="10">{_fmt(x_max)}</text>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{_HEIGHT - _MARGIN_BOTTOM}" '
        f'text-anchor="end" font-family="sans-serif" font-size="10">{_fmt(y_min)}</text>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{_MARGIN_TOP + 4}" '
        f'text-anchor="end" font-family="sans-serif" font-size="10">{_fmt(y_max)}</text>',
        # axis titles
        f'<text x="{_MARGIN_LEFT + plot_w / 2:g}" y="{_HEIGHT - 8}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{x_label}</text>',
        f'<text x="14" y="{_MARGIN_TOP + plot_h / 2:g}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 14 {_MARGIN_TOP + plot_h / 2:g})">{y_label}</text>',
    ]
    if diagonal:
        lo = max(x_min, y_min)
        hi = min(x_max, y_max)
        if hi > lo:
            parts.append(
                f'<line x1="{_fmt(px(lo))}" y1="{_fmt(py(lo))}" '
                f'x2="{_fmt(px(hi))}" y2="{_fmt(py(hi))}" stroke="gray" '
                f'stroke-width="1" stroke-dasharray="4 3"/>'
            )
    parts.append(
        f'<polyline fill="none" stroke="#1f6feb" stroke-width="1.5" points="{path}"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
