"""Minimal SVG scatter plots of atomic measures (fixed 600x600 viewport)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .spectra import AtomicMeasure

SIZE = 600
MARGIN = 30
MAX_RADIUS = 4.0
MIN_RADIUS = 0.6
PALETTE = ("#1f4e9c", "#c0392b", "#27864a", "#8e44ad")


def _radius_for(measures) -> float:
    extent = max((float(np.abs(m.locations).max()) for m in measures if len(m)), default=1.0)
    return max(1.0, extent) * 1.1


def scatter_svg(layers, radius: float | None = None, title: str = "") -> str:
    """Render ``layers``, a list of ``(measure, colour, label[, max_radius])``, as SVG.

    Point area scales with atom weight relative to the heaviest atom of the
    layer.  Dashed gridlines mark the axes and the unit circle.
    """
    measures = [layer[0] for layer in layers]
    R = radius if radius is not None else _radius_for(measures)
    scale = (SIZE - 2 * MARGIN) / (2 * R)

    def px(z: complex) -> tuple[float, float]:
        return SIZE / 2 + z.real * scale, SIZE / 2 - z.imag * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{SIZE / 2}" x2="{SIZE - MARGIN}" y2="{SIZE / 2}" stroke="#bbb" stroke-width="0.5"/>',
        f'<line x1="{SIZE / 2}" y1="{MARGIN}" x2="{SIZE / 2}" y2="{SIZE - MARGIN}" stroke="#bbb" stroke-width="0.5"/>',
        f'<circle class="unit-circle" cx="{SIZE / 2}" cy="{SIZE / 2}" r="{scale:.3f}" fill="none" '
        f'stroke="#999" stroke-width="0.7" stroke-dasharray="4 3"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN}" y="{MARGIN - 10}" font-family="sans-serif" font-size="13">{escape(title)}</text>')
    for i, layer in enumerate(layers):
        mu, colour, label = layer[:3]
        rmax = layer[3] if len(layer) > 3 else MAX_RADIUS
        out.append(f'<g class="layer" fill="{colour}" fill-opacity="0.75"><title>{escape(label)}</title>')
        wmax = float(mu.weights.max()) if len(mu) else 1.0
        for z, w in zip(mu.locations, mu.weights):
            x, y = px(z)
            r = max(MIN_RADIUS, rmax * math.sqrt(w / wmax))
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}"/>')
        out.append("</g>")
        out.append(
            f'<text x="{SIZE - MARGIN - 150}" y="{SIZE - MARGIN - 14 * (len(layers) - 1 - i)}" '
            f'font-family="sans-serif" font-size="11" fill="{colour}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def measure_svg(mu: AtomicMeasure, title: str = "", overlay: AtomicMeasure | None = None,
                radius: float | None = None) -> str:
    layers = []
    if overlay is not None:
        layers.append((overlay, "#aaaaaa", "limit", 1.0))
    layers.append((mu, PALETTE[0], title or "eigenvalues"))
    return scatter_svg(layers, radius=radius, title=title)
