"""SVG slice plots of a wall arrangement.

The picture lives in the chart (a, b) ↦ a·P1 + b·P2 of a 2-plane through the
origin.  The cone sector is the triangle with vertices 0, s·P1, s·P2 and each wall
meeting the sector is a segment from the origin to the far edge a + b = s.  Exact
coordinates are kept until the final float conversion for drawing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

from . import _linalg
from .errors import DimensionError
from .lattice import NumClass, SurfaceLattice, as_class
from .walls import WallSet

SIZE = 480
MARGIN = 40


@dataclass(frozen=True)
class Slice:
    p1: NumClass
    p2: NumClass
    scale: Fraction
    walls: tuple[tuple[NumClass, tuple[Fraction, Fraction]], ...]
    skipped: tuple[NumClass, ...]
    path: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None


def chart_coordinates(x, p1: NumClass, p2: NumClass) -> tuple[Fraction, Fraction]:
    """(a, b) with a·P1 + b·P2 = x; raises if x is off the plane."""
    x = as_class(x)
    coeffs = _linalg.solve_combination([list(p1.coords), list(p2.coords)], list(x.coords))
    if coeffs is None:
        raise DimensionError(f"class {x} does not lie in the plotted plane")
    return coeffs[0], coeffs[1]


def build_slice(walls: WallSet, p1, p2, lat: SurfaceLattice, path=None) -> Slice:
    p1, p2 = as_class(p1), as_class(p2)
    if _linalg.rank([list(p1.coords), list(p2.coords)]) != 2:
        raise DimensionError("plot basis classes are linearly dependent")
    chart_path = None
    scale = Fraction(1)
    if path is not None:
        chart_path = (chart_coordinates(path[0], p1, p2), chart_coordinates(path[1], p1, p2))
        scale = max([scale] + [a + b for a, b in chart_path])
    segs, skipped = [], []
    for hp in walls.hyperplanes:
        u, v = hp.value(p1, lat), hp.value(p2, lat)
        if u == 0 and v == 0:
            skipped.append(hp.normal)
            continue
        # a·u + b·v = 0 meets the closed sector iff u and v do not share a strict sign
        if (u > 0 and v > 0) or (u < 0 and v < 0):
            continue
        a = v / (v - u)
        segs.append((hp.normal, (scale * a, scale * (1 - a))))
    return Slice(p1, p2, scale, tuple(segs), tuple(skipped), chart_path)


def _screen(pt: tuple[Fraction, Fraction], scale: Fraction) -> tuple[float, float]:
    span = SIZE - 2 * MARGIN
    x = MARGIN + float(pt[0] / scale) * span
    y = SIZE - MARGIN - float(pt[1] / scale) * span
    return round(x, 3), round(y, 3)


def _label(pt: tuple[Fraction, Fraction], scale: Fraction, text: str) -> str:
    x, y = _screen(pt, scale)
    return f'<text class="coord" x="{x}" y="{y - 4}">{escape(text)}</text>'


def _fmt(p: NumClass) -> str:
    return "(" + ", ".join(str(c) for c in p) + ")"


def render_svg(sl: Slice, coords: bool = False, title: str = "") -> str:
    s = sl.scale
    origin = (Fraction(0), Fraction(0))
    v1, v2 = (s, Fraction(0)), (Fraction(0), s)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}"'
        f' viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title or 'wall arrangement slice')}</title>",
        "<style>.cone{fill:#eef3fb;stroke:#345;stroke-width:1}"
        ".wall{stroke:#b22;stroke-width:2}.path{stroke:#183;stroke-width:3}"
        ".coord{font:10px monospace;fill:#333}</style>",
    ]
    pts = " ".join(f"{x},{y}" for x, y in (_screen(p, s) for p in (origin, v1, v2)))
    out.append(f'<polygon class="cone" points="{pts}"/>')
    ox, oy = _screen(origin, s)
    for normal, end in sl.walls:
        x, y = _screen(end, s)
        out.append(f'<line class="wall" data-normal="{escape(_fmt(normal))}"'
                   f' x1="{ox}" y1="{oy}" x2="{x}" y2="{y}"/>')
    if sl.path is not None:
        (x1, y1), (x2, y2) = (_screen(p, s) for p in sl.path)
        out.append(f'<line class="path" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    if coords:
        out.append(_label(v1, s, f"{s}·P1 = {_fmt(s * sl.p1)}"))
        out.append(_label(v2, s, f"{s}·P2 = {_fmt(s * sl.p2)}"))
        for _, end in sl.walls:
            out.append(_label(end, s, _fmt(end[0] * sl.p1 + end[1] * sl.p2)))
        if sl.path is not None:
            for a, b in sl.path:
                out.append(_label((a, b), s, _fmt(a * sl.p1 + b * sl.p2)))
    for normal in sl.skipped:
        out.append(f"<!-- wall {escape(_fmt(normal))} contains the whole plane -->")
    out.append("</svg>")
    return "\n".join(out) + "\n"
