"""Minimal deterministic SVG heatmaps.

Hand-rolled on purpose: plotting libraries embed metadata (dates, library
versions) that breaks byte-identical reruns. Cells are at least 10 px,
the colormap is sequential and grayscale-safe, and a legend bar shows the
min/max magnitudes.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = ["heatmap_svg", "write_heatmap"]

# Sequential, luminance-monotone anchor colors (dark blue -> yellow).
_VIRIDIS = [
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
]

_MARGIN = 12
_LEGEND_W = 18
_LEGEND_GAP = 24
_LEGEND_STEPS = 48
_FONT = 'font-family="monospace" font-size="11"'


def _interp_color(anchors, t: float):
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(anchors, anchors[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            return tuple(round(a + w * (b - a)) for a, b in zip(c0, c1))
    return anchors[-1][1]


def _color(name: str, t: float) -> str:
    if name == "gray":
        g = round(255 * (1.0 - min(max(t, 0.0), 1.0)))
        r, gg, b = g, g, g
    elif name == "viridis":
        r, gg, b = _interp_color(_VIRIDIS, t)
    else:
        raise ValidationError(f"unknown colormap {name!r} (use 'viridis' or 'gray')")
    return f"#{r:02x}{gg:02x}{b:02x}"


def heatmap_svg(values, cell: int = 10, colormap: str = "viridis") -> str:
    """Render a nonnegative matrix as an SVG heatmap string.

    Rows are drawn top to bottom in index order, columns left to right.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValidationError(f"heatmap needs a 2-D array, got shape {values.shape}")
    if cell < 10:
        raise ValidationError(f"cells must be at least 10 px, got {cell}")
    rows, cols = values.shape
    vmin = float(values.min()) if values.size else 0.0
    vmax = float(values.max()) if values.size else 0.0
    span = vmax - vmin

    grid_w = cols * cell
    grid_h = rows * cell
    width = _MARGIN + grid_w + _LEGEND_GAP + _LEGEND_W + 64 + _MARGIN
    height = _MARGIN + max(grid_h, 120) + _MARGIN

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i in range(rows):
        for j in range(cols):
            t = 0.0 if span == 0.0 else (values[i, j] - vmin) / span
            x = _MARGIN + j * cell
            y = _MARGIN + i * cell
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{_color(colormap, t)}"/>'
            )
    parts.append(
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{grid_w}" height="{grid_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )

    lx = _MARGIN + grid_w + _LEGEND_GAP
    lh = max(grid_h, 120)
    step_h = lh / _LEGEND_STEPS
    for k in range(_LEGEND_STEPS):
        t = 1.0 - k / (_LEGEND_STEPS - 1)
        y = _MARGIN + k * step_h
        parts.append(
            f'<rect x="{lx}" y="{y:.2f}" width="{_LEGEND_W}" height="{step_h + 0.5:.2f}" '
            f'fill="{_color(colormap, t)}"/>'
        )
    parts.append(
        f'<rect x="{lx}" y="{_MARGIN}" width="{_LEGEND_W}" height="{lh}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    tx = lx + _LEGEND_W + 6
    parts.append(f'<text x="{tx}" y="{_MARGIN + 10}" {_FONT}>{vmax:.4g}</text>')
    parts.append(f'<text x="{tx}" y="{_MARGIN + lh}" {_FONT}>{vmin:.4g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_heatmap(path, values, cell: int = 10, colormap: str = "viridis") -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(heatmap_svg(values, cell=cell, colormap=colormap))
