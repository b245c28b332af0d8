"""Bare-bones scatter plot writer for eyeballing scan and sample output."""

from __future__ import annotations

from typing import Iterable


def scatter(points: Iterable[tuple[float, float, str, bool]], path: str,
            size: int = 480, pad: int = 30) -> None:
    """``points`` are ``(x, y, colour, filled)``; axes span the data's bounding box."""
    pts = list(points)
    if not pts:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    else:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    wx = (x1 - x0) or 1.0
    wy = (y1 - y0) or 1.0
    span = size - 2 * pad

    def sx(x):
        return pad + span * (x - x0) / wx

    def sy(y):
        return size - pad - span * (y - y0) / wy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
        f'<rect x="{pad}" y="{pad}" width="{span}" height="{span}" fill="none" stroke="#888"/>',
        f'<text x="{pad}" y="{size - 8}" font-size="11">x1 {x0:g} to {x1:g}</text>',
        f'<text x="4" y="{pad - 8}" font-size="11">x2 {y0:g} to {y1:g}</text>',
    ]
    for x, y, colour, filled in pts:
        fill = colour if filled else "none"
        out.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="{fill}" stroke="{colour}"/>'
        )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
