"""Minimal deterministic SVG plotting: line charts and region maps.

No plotting dependency: figures must regenerate byte-identically from the
same inputs on any machine, so everything is written out as plain SVG
text with fixed formatting. Only what the bundled figures need is
implemented (polyline series with legend, and a colored-cell region map
with overlay curves).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_W, _H = 720, 520
_ML, _MR, _MT, _MB = 72, 24, 36, 56  # plot margins

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

_REGION_FILL = {
    "symmetric": "#1f77b4",
    "asymmetric": "#d62728",
    "none": "#f4f4f4",
}


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


@dataclass
class Series:
    label: str
    xs: list[float]
    ys: list[float]


def _axes(
    parts: list[str],
    xlim: tuple[float, float],
    ylim: tuple[float, float],
    xlabel: str,
    ylabel: str,
    title: str,
    log_y: bool,
) -> tuple:
    x0, x1 = xlim
    y0, y1 = ylim

    def px(x: float) -> float:
        return _ML + (x - x0) / (x1 - x0) * (_W - _ML - _MR)

    def py(y: float) -> float:
        yy = math.log10(y) if log_y else y
        z0 = math.log10(y0) if log_y else y0
        z1 = math.log10(y1) if log_y else y1
        return _H - _MB - (yy - z0) / (z1 - z0) * (_H - _MT - _MB)

    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="black"/>'
    )
    parts.append(
        f'<text x="{_W // 2}" y="{_MT - 12}" text-anchor="middle" '
        f'font-size="14">{title}</text>'
    )
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 12}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{_H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {_H // 2})">{ylabel}</text>'
    )
    for t in _nice_ticks(x0, x1):
        parts.append(
            f'<line x1="{_fmt(px(t))}" y1="{_H - _MB}" x2="{_fmt(px(t))}" '
            f'y2="{_H - _MB + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(px(t))}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-size="11">{_fmt(t)}</text>'
        )
    ticks = (
        [10.0**k for k in range(math.ceil(math.log10(y0)), math.floor(math.log10(y1)) + 1)]
        if log_y
        else _nice_ticks(y0, y1)
    )
    for t in ticks:
        parts.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(py(t))}" x2="{_ML}" '
            f'y2="{_fmt(py(t))}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{_fmt(py(t) + 4)}" text-anchor="end" '
            f'font-size="11">{_fmt(t)}</text>'
        )
    return px, py


def line_plot(
    series: list[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_y: bool = False,
) -> str:
    """Self-contained SVG line chart for a list of (label, xs, ys) series."""
    xs_all = [x for s in series for x in s.xs]
    ys_all = [y for s in series for y in s.ys if not log_y or y > 0]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    if not log_y:
        pad = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad, y1 + pad

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    px, py = _axes(parts, (x0, x1), (y0, y1), xlabel, ylabel, title, log_y)
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{_fmt(px(x))},{_fmt(py(y))}"
            for x, y in zip(s.xs, s.ys)
            if not log_y or y > 0
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MT + 16 + 16 * i
        parts.append(
            f'<line x1="{_W - _MR - 150}" y1="{ly - 4}" x2="{_W - _MR - 120}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_W - _MR - 114}" y="{ly}" font-size="11">{s.label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def region_plot(
    xs: list[float],
    ys: list[float],
    kinds: list[list[str]],
    overlays: list[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Region map: cell (i, j) covers (xs[i], ys[j]), colored by kind string.

    Overlay series are drawn as dashed black curves (analytic boundary
    approximations); points outside the plot window are dropped.
    """
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    px, py = _axes(parts, (x0, x1), (y0, y1), xlabel, ylabel, title, False)
    dx = (xs[1] - xs[0]) if len(xs) > 1 else 1.0
    dy = (ys[1] - ys[0]) if len(ys) > 1 else 1.0
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            kind = kinds[i][j]
            if kind == "none":
                continue
            parts.append(
                f'<rect x="{_fmt(px(x - dx / 2))}" y="{_fmt(py(y + dy / 2))}" '
                f'width="{_fmt(px(x + dx / 2) - px(x - dx / 2))}" '
                f'height="{_fmt(py(y - dy / 2) - py(y + dy / 2))}" '
                f'fill="{_REGION_FILL[kind]}" fill-opacity="0.6"/>'
            )
    for s in overlays:
        pts = " ".join(
            f"{_fmt(px(x))},{_fmt(py(y))}"
            for x, y in zip(s.xs, s.ys)
            if x0 <= x <= x1 and y0 <= y <= y1
        )
        if pts:
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="black" '
                f'stroke-width="1.2" stroke-dasharray="5,3"/>'
            )
    leg = [("symmetric", "symmetric generation"), ("asymmetric", "asymmetric generation")]
    for i, (kind, label) in enumerate(leg):
        ly = _MT + 16 + 16 * i
        parts.append(
            f'<rect x="{_W - _MR - 190}" y="{ly - 10}" width="12" height="12" '
            f'fill="{_REGION_FILL[kind]}" fill-opacity="0.6"/>'
        )
        parts.append(f'<text x="{_W - _MR - 172}" y="{ly}" font-size="11">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
