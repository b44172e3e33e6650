"""Minimal SVG heatmaps for pair matrices. CSV output remains canonical."""

from __future__ import annotations

import numpy as np

_CELL_AREA = 520
_MARGIN = 60


def heatmap_svg(matrix, title: str = "") -> str:
    """Grayscale heatmap of a square matrix; darker cells are larger values.

    Rows run top to bottom, columns left to right, both labelled with item
    indices on a sparse tick grid.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    n = m.shape[0]
    lo = float(m.min())
    hi = float(m.max())
    span = hi - lo if hi > lo else 1.0
    cell = _CELL_AREA / n
    width = _MARGIN + _CELL_AREA + 20
    height = _MARGIN + _CELL_AREA + 40

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_MARGIN}" y="24" font-family="sans-serif" font-size="14">{title}</text>'
        )
    for i in range(n):
        for j in range(n):
            shade = int(round(255 * (1.0 - (m[i, j] - lo) / span)))
            color = f"rgb({shade},{shade},{shade})"
            x = _MARGIN + j * cell
            y = _MARGIN + i * cell
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell:.2f}" height="{cell:.2f}" fill="{color}"/>'
            )
    step = max(1, n // 10)
    for k in range(0, n, step):
        cx = _MARGIN + (k + 0.5) * cell
        cy = _MARGIN + (k + 0.5) * cell
        parts.append(
            f'<text x="{cx:.2f}" y="{_MARGIN + _CELL_AREA + 16}" font-family="sans-serif" '
            f'font-size="9" text-anchor="middle">{k}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN - 6}" y="{cy:.2f}" font-family="sans-serif" font-size="9" '
            f'text-anchor="end" dominant-baseline="middle">{k}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN}" y="{height - 8}" font-family="sans-serif" font-size="10">'
        f"min {lo:.4g}, max {hi:.4g}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts)


def write_heatmap(path, matrix, title: str = "") -> None:
    with open(path, "w") as fh:
        fh.write(heatmap_svg(matrix, title))
