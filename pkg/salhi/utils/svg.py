"""
Minimal SVG line-plot emitter
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")

PANEL_WIDTH = 480
PANEL_HEIGHT = 320
MARGIN_LEFT = 64
MARGIN_RIGHT = 24
MARGIN_TOP = 32
MARGIN_BOTTOM = 48
TICKS = 5


@dataclass(frozen=True)
class PlotSeries:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    dashed: bool = False


@dataclass
class PlotPanel:
    title: str
    x_label: str
    y_label: str
    series: List[PlotSeries] = field(default_factory=list)
    y_range: Optional[Tuple[float, float]] = None

    def add(self, label: str, x: Sequence[float], y: Sequence[float], dashed: bool = False) -> "PlotPanel":
        self.series.append(PlotSeries(label, list(x), list(y), dashed))
        return self


def _finite_points(series: PlotSeries) -> List[Tuple[float, float]]:
    return [(float(x), float(y)) for x, y in zip(series.x, series.y) if math.isfinite(x) and math.isfinite(y)]


def _limits(values: Sequence[float]) -> Tuple[float, float]:
    if not values:
        return 0.0, 1.0
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12 * max(1.0, abs(hi)):
        pad = 0.5 if hi == 0 else 0.05 * abs(hi)
        return lo - pad, hi + pad
    return lo, hi


def _tick_label(value: float) -> str:
    return format(value, ".3g")


def _render_panel(panel: PlotPanel, x0: float, y0: float) -> List[str]:
    points = [p for s in panel.series for p in _finite_points(s)]
    x_lo, x_hi = _limits([p[0] for p in points])
    y_lo, y_hi = panel.y_range if panel.y_range else _limits([p[1] for p in points])

    plot_w = PANEL_WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    left, top = x0 + MARGIN_LEFT, y0 + MARGIN_TOP
    bottom = top + plot_h

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return bottom - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<text x="{x0 + PANEL_WIDTH / 2:.1f}" y="{y0 + 20:.1f}" text-anchor="middle" font-size="14">{escape(panel.title)}</text>',
        f'<rect x="{left:.1f}" y="{top:.1f}" width="{plot_w:.1f}" height="{plot_h:.1f}" fill="none" stroke="black"/>',
    ]
    for value in np.linspace(x_lo, x_hi, TICKS):
        x = sx(value)
        out.append(f'<line x1="{x:.1f}" y1="{bottom:.1f}" x2="{x:.1f}" y2="{bottom + 5:.1f}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{bottom + 18:.1f}" text-anchor="middle" font-size="10">{_tick_label(value)}</text>')
    for value in np.linspace(y_lo, y_hi, TICKS):
        y = sy(value)
        out.append(f'<line x1="{left - 5:.1f}" y1="{y:.1f}" x2="{left:.1f}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{left - 8:.1f}" y="{y + 3:.1f}" text-anchor="end" font-size="10">{_tick_label(value)}</text>')
    out.append(f'<text x="{left + plot_w / 2:.1f}" y="{y0 + PANEL_HEIGHT - 10:.1f}" text-anchor="middle" font-size="12">{escape(panel.x_label)}</text>')
    out.append(
        f'<text x="{x0 + 16:.1f}" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 {x0 + 16:.1f} {top + plot_h / 2:.1f})">{escape(panel.y_label)}</text>'
    )

    for i, series in enumerate(panel.series):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in _finite_points(series))
        dash = ' stroke-dasharray="6 4"' if series.dashed else ""
        if coords:
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        legend_y = top + 14 * (i + 1)
        out.append(f'<line x1="{left + 8:.1f}" y1="{legend_y - 4:.1f}" x2="{left + 28:.1f}" y2="{legend_y - 4:.1f}" stroke="{color}"{dash}/>')
        out.append(f'<text x="{left + 32:.1f}" y="{legend_y:.1f}" font-size="10">{escape(series.label)}</text>')
    return out


def render_svg(panels: Sequence[PlotPanel], columns: int = 3) -> str:
    """
    Render panels on a grid into a standalone SVG document

    Args:
        panels: Panels in reading order
        columns: Panels per row

    Returns:
        SVG text
    """
    columns = max(1, min(columns, len(panels)))
    rows = max(1, math.ceil(len(panels) / columns))
    width, height = columns * PANEL_WIDTH, rows * PANEL_HEIGHT
    body = []
    for k, panel in enumerate(panels):
        body.extend(_render_panel(panel, (k % columns) * PANEL_WIDTH, (k // columns) * PANEL_HEIGHT))
    header = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">'
    )
    return "\n".join([header, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>"]) + "\n"
