"""Minimal deterministic SVG line charts.

Output contains no timestamps or random identifiers, so identical inputs
produce byte-identical files; CSVs remain the authoritative artifacts.
"""
from __future__ import annotations

import math

import numpy as np

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
           "#aec7e8", "#ffbb78")

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 40, 48


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mag * mult >= raw:
            step = mag * mult
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_chart(
    series: list[tuple[str, np.ndarray, np.ndarray]],
    title: str,
    xlabel: str,
    ylabel: str,
    log_y: bool = False,
) -> str:
    """Render labelled (x, y) polylines; zero/negative y values on a log
    axis are clamped to a tenth of the smallest positive value."""
    if not series:
        raise ValueError("need at least one series")
    xs_all = np.concatenate([np.asarray(x, dtype=float) for _, x, _ in series])
    ys_all = np.concatenate([np.asarray(y, dtype=float) for _, _, y in series])

    if log_y:
        positive = ys_all[ys_all > 0.0]
        floor = float(positive.min()) * 0.1 if positive.size else 1e-16
        ys_all = np.maximum(ys_all, floor)
        ylo, yhi = math.log10(ys_all.min()), math.log10(ys_all.max())
        if yhi - ylo < 1e-9:
            ylo, yhi = ylo - 1.0, yhi + 1.0
        yticks = [float(t) for t in range(math.ceil(ylo), math.floor(yhi) + 1)]
        if len(yticks) > 8:
            stride = -(-len(yticks) // 8)
            yticks = yticks[::stride]
        if not yticks:
            yticks = [ylo, yhi]
    else:
        ylo, yhi = float(ys_all.min()), float(ys_all.max())
        if yhi - ylo < 1e-12:
            ylo, yhi = ylo - 1.0, yhi + 1.0
        yticks = _nice_ticks(ylo, yhi)
    xlo, xhi = float(xs_all.min()), float(xs_all.max())
    if xhi - xlo < 1e-12:
        xhi = xlo + 1.0
    xticks = _nice_ticks(xlo, xhi)

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - xlo) / (xhi - xlo) * plot_w

    def py(v):
        if log_y:
            v = math.log10(max(v, 10.0**ylo))
        return MARGIN_T + plot_h - (v - ylo) / (yhi - ylo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    # axes
    x0, y0 = MARGIN_L, MARGIN_T + plot_h
    parts.append(
        f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{MARGIN_L + plot_w}" y2="{y0}" stroke="black"/>'
    )
    for t in xticks:
        if not xlo <= t <= xhi:
            continue
        xp = px(t)
        parts.append(
            f'<line x1="{_fmt(xp)}" y1="{y0}" x2="{_fmt(xp)}" y2="{y0 + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(xp)}" y="{y0 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>'
        )
    for t in yticks:
        label = f"1e{t:g}" if log_y else f"{t:g}"
        yv = 10.0**t if log_y else t
        yp = py(yv)
        parts.append(
            f'<line x1="{x0 - 5}" y1="{_fmt(yp)}" x2="{x0}" y2="{_fmt(yp)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(yp + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN_T + plot_h / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.0f})">{ylabel}</text>'
    )
    # series
    for idx, (label, xs, ys) in enumerate(series):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if log_y:
            ys = np.maximum(ys, 10.0**ylo)
        pts = " ".join(f"{_fmt(px(xv))},{_fmt(py(yv))}" for xv, yv in zip(xs, ys))
        color = PALETTE[idx % len(PALETTE)]
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 14 + 16 * idx
        lx = MARGIN_L + plot_w - 150
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
