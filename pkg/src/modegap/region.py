"""Exact decision-region geometry on the 2-simplex, with SVG rendering.

Points are barycentric triples of Fractions. Regions are clipped out of
the simplex triangle one half-plane at a time; all areas are measured in
the ``(p2, p3)`` chart, where the whole simplex has area 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cost_matrix import CanonicalCostMatrix, CostMatrix, as_cost_matrix
from .errors import EmptyInput, WrongArity

Point = tuple[Fraction, Fraction, Fraction]
Form = tuple[Fraction, Fraction, Fraction]

ONE, ZERO = Fraction(1), Fraction(0)
CORNERS: tuple[Point, ...] = ((ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE))
SIMPLEX_AREA = Fraction(1, 2)

MODE, BAYES, DISAGREEMENT = "mode", "bayes", "disagreement"


def _dot(h: Form, p: Point) -> Fraction:
    return h[0] * p[0] + h[1] * p[1] + h[2] * p[2]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    # z-component of (a-o) x (b-o) in the (p2, p3) chart
    return (a[1] - o[1]) * (b[2] - o[2]) - (a[2] - o[2]) * (b[1] - o[1])


def _lerp(a: Point, b: Point, t: Fraction) -> Point:
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def clip(polygon: Sequence[Point], form: Form) -> list[Point]:
    """Keep the part of a convex polygon where ``form . p >= 0``."""
    out: list[Point] = []
    n = len(polygon)
    for i in range(n):
        cur, nxt = polygon[i], polygon[(i + 1) % n]
        dc, dn = _dot(form, cur), _dot(form, nxt)
        if dc >= 0:
            out.append(cur)
        if (dc > 0 > dn) or (dc < 0 < dn):
            out.append(_lerp(cur, nxt, dc / (dc - dn)))
    return _tidy(out)


def _tidy(points: list[Point]) -> list[Point]:
    pts: list[Point] = []
    for q in points:
        if not pts or pts[-1] != q:
            pts.append(q)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) <= 2:
        return pts
    if _shoelace(pts) == 0:
        # collinear: keep the two extremes
        key = (lambda q: (q[1], q[2])) if len({q[1] for q in pts}) > 1 else (lambda q: q[2])
        lo, hi = min(pts, key=key), max(pts, key=key)
        return [lo] if lo == hi else [lo, hi]
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            if _cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def _shoelace(pts: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        total += a[1] * b[2] - b[1] * a[2]
    return total / 2


def homogenize(coeffs: Sequence, const) -> Form:
    """Rewrite ``coeffs . p >= const`` as ``form . p >= 0`` on the simplex."""
    c = Fraction(const)
    return tuple(Fraction(a) - c for a in coeffs)


@dataclass(frozen=True)
class SimplexPolygon:
    """Convex polygon in barycentric coordinates, counterclockwise.

    ``labels`` is ``(t,)`` for mode and bayes regions and ``(m, w)`` for a
    disagreement piece: mode ``m`` beaten by ``w``. For disagreement the
    meaningful set is open (``open_interior``): the points of the simplex
    where every form in ``strict_forms`` is positive.
    """

    vertices: tuple[Point, ...]
    rule: str
    labels: tuple[int, ...]
    open_interior: bool = False
    strict_forms: tuple[Form, ...] = ()

    @property
    def area(self) -> Fraction:
        return _shoelace(self.vertices) if len(self.vertices) > 2 else Fraction(0)

    @property
    def degenerate(self) -> bool:
        return self.area == 0

    @property
    def label(self) -> int:
        return self.labels[0]

    def contains(self, p, open_: Optional[bool] = None) -> bool:
        """Exact point-in-convex-polygon test.

        With ``open_`` (default: ``open_interior``) the defining
        ``strict_forms`` must be positive at ``p``; without stored forms,
        every edge is treated as open.
        """
        p = tuple(Fraction(x) for x in p)
        if open_ is None:
            open_ = self.open_interior
        vs = self.vertices
        if self.degenerate:
            if open_:
                return False
            if len(vs) == 1:
                return p == vs[0]
            a, b = vs[0], vs[-1]
            if _cross(a, b, p) != 0:
                return False
            return all(min(x, y) <= z <= max(x, y) for x, y, z in zip(a, b, p))
        if open_ and self.strict_forms:
            if any(_dot(h, p) <= 0 for h in self.strict_forms):
                return False
            open_ = False
        for i in range(len(vs)):
            c = _cross(vs[i], vs[(i + 1) % len(vs)], p)
            if c < 0 or (c == 0 and open_):
                return False
        return True


@dataclass(frozen=True)
class RegionSet:
    rule: str
    polygons: tuple[SimplexPolygon, ...]
    matrix: Optional[CanonicalCostMatrix] = None

    @property
    def area(self) -> Fraction:
        return sum((poly.area for poly in self.polygons), Fraction(0))

    def labels_at(self, p) -> set[int]:
        """Labels whose region contains ``p`` (mode label for disagreement)."""
        return {poly.label for poly in self.polygons if poly.contains(p)}


def _region(forms: Sequence[Form]) -> list[Point]:
    poly = list(CORNERS)
    for h in forms:
        poly = clip(poly, h)
        if not poly:
            break
    return poly


def _ternary(C) -> CostMatrix:
    m = as_cost_matrix(C)
    if m.k != 3:
        raise WrongArity(f"region geometry needs k=3, got k={m.k}")
    return m


def mode_regions_ternary() -> RegionSet:
    polys = []
    for t in range(3):
        forms = []
        for j in range(3):
            if j != t:
                h = [ZERO] * 3
                h[t], h[j] = ONE, -ONE
                forms.append(tuple(h))
        polys.append(SimplexPolygon(tuple(_region(forms)), MODE, (t + 1,)))
    return RegionSet(MODE, tuple(polys))


def _loss_gap(m: CostMatrix, worse: int, better: int) -> Form:
    """Form that is >= 0 where decision ``better`` costs no more than ``worse``."""
    return tuple(x - y for x, y in zip(m.entries[worse], m.entries[better]))


def bayes_regions_ternary(C) -> RegionSet:
    """For each label, the closed set where it attains the minimal expected
    loss. Labels that are never optimal are omitted; boundary-only
    regions are kept and flagged ``degenerate``."""
    m = _ternary(C)
    polys = []
    for t in range(3):
        forms = [_loss_gap(m, j, t) for j in range(3) if j != t]
        verts = _region(forms)
        if verts:
            polys.append(SimplexPolygon(tuple(verts), BAYES, (t + 1,)))
    return RegionSet(BAYES, tuple(polys), _canonical_or_none(C))


def disagreement_region(C) -> RegionSet:
    """Pieces where the unique mode ``m`` is beaten by some ``w``.

    Each piece is the closure of an open set; pieces with empty interior
    carry no disagreement and are dropped.
    """
    m = _ternary(C)
    polys = []
    for mi in range(3):
        mode_forms = []
        for j in range(3):
            if j != mi:
                h = [ZERO] * 3
                h[mi], h[j] = ONE, -ONE
                mode_forms.append(tuple(h))
        for wi in range(3):
            if wi == mi:
                continue
            gap = _loss_gap(m, mi, wi)
            if gap[0] == gap[1] == gap[2] and gap[0] <= 0:
                continue
            verts = _region(mode_forms + [gap])
            if len(verts) > 2 and _shoelace(verts) > 0:
                forms = tuple(mode_forms) + (gap,)
                polys.append(
                    SimplexPolygon(tuple(verts), DISAGREEMENT, (mi + 1, wi + 1), True, forms)
                )
    return RegionSet(DISAGREEMENT, tuple(polys), _canonical_or_none(C))


def _canonical_or_none(C) -> Optional[CanonicalCostMatrix]:
    if isinstance(C, CanonicalCostMatrix):
        return C
    try:
        return CanonicalCostMatrix(as_cost_matrix(C))
    except Exception:
        return None


# -- rendering ---------------------------------------------------------------

DEFAULT_PALETTE = {
    MODE: ("#8dd3c7", "#bebada", "#80b1d3"),
    BAYES: ("#fdb462", "#b3de69", "#fccde5"),
    DISAGREEMENT: ("#e41a1c", "#e41a1c", "#e41a1c"),
}
_OPACITY = {MODE: "0.55", BAYES: "0.55", DISAGREEMENT: "0.75"}


def _project(p: Point, side: float, margin: float) -> tuple[float, float]:
    x = float(p[1]) + float(p[2]) / 2
    y = math.sqrt(3) / 2 * float(p[2])
    return margin + side * x, margin + side * (math.sqrt(3) / 2 - y)


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(points, side, margin) -> str:
    xy = [_project(q, side, margin) for q in points]
    cmds = [f"M{_fmt(xy[0][0])},{_fmt(xy[0][1])}"]
    cmds += [f"L{_fmt(x)},{_fmt(y)}" for x, y in xy[1:]]
    return " ".join(cmds) + " Z"


def _describe(poly: SimplexPolygon) -> str:
    if poly.rule == DISAGREEMENT:
        return f"disagreement: mode {poly.labels[0]}, Bayes prefers {poly.labels[1]}"
    return f"{poly.rule} {poly.label}" + (" (boundary only)" if poly.degenerate else "")


def render_svg(
    sets: Sequence[RegionSet],
    width: int = 480,
    palette: Optional[dict] = None,
    show_grid: bool = False,
) -> str:
    """Draw region sets on an equilateral triangle as an SVG 1.1 document.

    Output is a pure function of the inputs; floats appear only here.
    """
    if not sets:
        raise EmptyInput("no region sets to render")
    colours = dict(DEFAULT_PALETTE)
    if palette:
        colours.update(palette)
    margin = 24.0
    side = width - 2 * margin
    tri_h = side * math.sqrt(3) / 2
    legend_items = [(rs.rule, poly) for rs in sets for poly in rs.polygons]
    height = margin * 2 + tri_h + 18 * (len(legend_items) + 1)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for rs in sets:
        out.append(f'<g class="regions {rs.rule}">')
        for poly in rs.polygons:
            colour = colours[rs.rule][(poly.label - 1) % len(colours[rs.rule])]
            d = _path(poly.vertices, side, margin)
            if poly.degenerate:
                out.append(
                    f'<path class="region degenerate" d="{d}" fill="none" '
                    f'stroke="{colour}" stroke-width="3"/>'
                )
            else:
                out.append(
                    f'<path class="region" d="{d}" fill="{colour}" '
                    f'fill-opacity="{_OPACITY[rs.rule]}" stroke="#333333" stroke-width="0.5"/>'
                )
        out.append("</g>")
    if show_grid:
        out.append('<g class="grid" stroke="#999999" stroke-width="0.3">')
        for n in range(1, 10):
            f = Fraction(n, 10)
            for i in range(3):
                a = [ZERO] * 3
                b = [ZERO] * 3
                a[i] = b[i] = f
                a[(i + 1) % 3] = 1 - f
                b[(i + 2) % 3] = 1 - f
                (x1, y1), (x2, y2) = _project(tuple(a), side, margin), _project(tuple(b), side, margin)
                out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>')
        out.append("</g>")
    out.append(
        f'<path class="simplex" d="{_path(CORNERS, side, margin)}" fill="none" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    for i, corner in enumerate(CORNERS):
        x, y = _project(corner, side, margin)
        dy = -8 if i == 2 else 16
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y + dy)}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle">{i + 1}</text>'
        )
    y0 = margin * 2 + tri_h
    out.append('<g class="legend" font-family="sans-serif" font-size="11">')
    for n, (rule, poly) in enumerate(legend_items):
        colour = colours[rule][(poly.label - 1) % len(colours[rule])]
        y = y0 + 18 * n
        out.append(f'<rect x="{_fmt(margin)}" y="{_fmt(y)}" width="12" height="12" fill="{colour}"/>')
        out.append(f'<text x="{_fmt(margin + 18)}" y="{_fmt(y + 10)}">{_describe(poly)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def region_set_to_json(rs: RegionSet) -> dict:
    polys = []
    for poly in rs.polygons:
        entry = {
            "label": poly.labels[0],
            "vertices": [[str(x) for x in v] for v in poly.vertices],
            "area": str(poly.area),
            "degenerate": poly.degenerate,
        }
        if rs.rule == DISAGREEMENT:
            entry["better_label"] = poly.labels[1]
            entry["interior_only"] = True
        polys.append(entry)
    return {"rule": rs.rule, "polygons": polys}
