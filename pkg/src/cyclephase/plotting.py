"""Self-contained SVG rose histogram."""

from __future__ import annotations

import math

import numpy as np


def _pt(cx, cy, r, theta):
    # math convention: 0 rad points right, angles grow counter-clockwise
    return cx + r * math.cos(theta), cy - r * math.sin(theta)


def emit_rose_svg(rose_counts, mean_phase=None, resultant_length=None, size: int = 320, title: str = "") -> str:
    """Polar histogram of phase counts with the mean resultant vector.

    Bin ``k`` of ``len(rose_counts)`` covers ``[-pi + k*w, -pi + (k+1)*w)``.
    Wedge radius is proportional to the count; empty bins draw nothing. The
    arrow has length ``R`` times the outer radius and points at ``mean_phase``.
    """
    counts = np.asarray(rose_counts, dtype=float)
    bins = counts.size
    if bins < 4:
        raise ValueError("need at least 4 bins")
    cx = cy = size / 2
    outer = 0.42 * size
    width = 2 * math.pi / bins
    peak = counts.max() if counts.max() > 0 else 1.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>{title or 'rose histogram'}</title>",
        f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{outer:.3f}" fill="none" stroke="#bbb"/>',
    ]
    for k, c in enumerate(counts):
        if c <= 0:
            continue
        r = outer * c / peak
        a0 = -math.pi + k * width
        a1 = a0 + width
        x0, y0 = _pt(cx, cy, r, a0)
        x1, y1 = _pt(cx, cy, r, a1)
        large = 1 if width > math.pi else 0
        # sweep-flag 0: counter-clockwise on screen, matching increasing angle
        parts.append(
            f'<path class="wedge" data-bin="{k}" data-count="{int(c)}" data-radius="{r:.6f}" '
            f'd="M {cx:.3f} {cy:.3f} L {x0:.3f} {y0:.3f} A {r:.3f} {r:.3f} 0 {large} 0 {x1:.3f} {y1:.3f} Z" '
            f'fill="#4a7bb7" fill-opacity="0.7" stroke="#234"/>'
        )
    if mean_phase is not None and resultant_length is not None:
        x, y = _pt(cx, cy, outer * float(resultant_length), float(mean_phase))
        parts.append(
            f'<line id="mean-vector" data-angle="{float(mean_phase):.12g}" data-length="{float(resultant_length):.12g}" '
            f'x1="{cx:.3f}" y1="{cy:.3f}" x2="{x:.3f}" y2="{y:.3f}" stroke="#c0392b" stroke-width="3"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
