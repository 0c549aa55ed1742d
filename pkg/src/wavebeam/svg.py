"""Minimal deterministic SVG output for dispersion charts and mode maps.

Only a tiny subset of SVG is produced: axes, polylines, filled cells and
text labels, with fixed float formatting so identical inputs give
byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0.0:
        return [lo]
    raw = span / target
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = np.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(float(t))
        t += step
    return out


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str


def line_chart(series: list[Series], xlabel: str, ylabel: str, title: str,
               width: int = 640, height: int = 480) -> str:
    """Multi-series line chart as a standalone SVG document."""
    ml, mr, mt, mb = 56, 16, 28, 44
    pw, ph = width - ml - mr, height - mt - mb
    xs = np.concatenate([s.x for s in series]) if series else np.array([0.0, 1.0])
    ys = np.concatenate([s.y for s in series]) if series else np.array([0.0, 1.0])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 - x0 <= 0.0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 <= 0.0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    y0 -= 0.04 * (y1 - y0)
    y1 += 0.04 * (y1 - y0)

    def px(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y: float) -> float:
        return mt + ph - (y - y0) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    for t in _ticks(x0, x1):
        parts.append(f'<line x1="{_fmt(px(t))}" y1="{mt + ph}" '
                     f'x2="{_fmt(px(t))}" y2="{mt + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(px(t))}" y="{mt + ph + 18}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{t:g}</text>')
    for t in _ticks(y0, y1):
        parts.append(f'<line x1="{ml - 5}" y1="{_fmt(py(t))}" '
                     f'x2="{ml}" y2="{_fmt(py(t))}" stroke="black"/>')
        parts.append(f'<text x="{ml - 8}" y="{_fmt(py(t) + 4)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{t:g}</text>')
    parts.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
                 f'fill="none" stroke="black"/>')
    parts.append(f'<text x="{ml + pw / 2:.0f}" y="{height - 8}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">{xlabel}</text>')
    parts.append(f'<text x="14" y="{mt + ph / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 14 {mt + ph / 2:.0f})">{ylabel}</text>')
    for i, s in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}"
                       for x, y in zip(s.x, s.y))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        lx, ly = ml + pw - 6, mt + 16 + 14 * i
        parts.append(f'<line x1="{lx - 28}" y1="{ly - 4}" x2="{lx - 8}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx - 34}" y="{ly}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{s.label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def _diverging(t: float) -> str:
    """Blue-white-red map on [-1, 1]."""
    t = max(-1.0, min(1.0, t))
    if t < 0.0:
        r, g, b = 1.0 + t, 1.0 + t, 1.0
    else:
        r, g, b = 1.0, 1.0 - t, 1.0 - t
    return f"#{int(round(255 * r)):02x}{int(round(255 * g)):02x}{int(round(255 * b)):02x}"


def mode_map(x1: np.ndarray, x2: np.ndarray, values: np.ndarray, title: str,
             width: int = 420) -> str:
    """Filled-cell map of one displacement component over the section."""
    n1, n2 = values.shape
    aspect = (x2[-1] - x2[0]) / (x1[-1] - x1[0])
    ml, mt, mb = 16, 30, 16
    pw = width - 2 * ml
    ph = pw * aspect
    height = int(mt + ph + mb)
    peak = float(np.max(np.abs(values))) or 1.0
    cw, ch = pw / n1, ph / n2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="19" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>',
    ]
    for i in range(n1):
        for j in range(n2):
            color = _diverging(float(values[i, j]) / peak)
            x = ml + i * cw
            y = mt + ph - (j + 1) * ch
            parts.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" '
                         f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                         f'fill="{color}"/>')
    parts.append(f'<rect x="{ml}" y="{mt}" width="{_fmt(pw)}" '
                 f'height="{_fmt(ph)}" fill="none" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)
