"""Combinatorial patchworking of plane curves.

A convex lattice polygon with a unimodular triangulation and signs at its
lattice points gives two things: a degeneration (edges are nodes of the
special fiber, triangles are pairs of pants) and the Viro graph, the
combinatorial model of the nearby real curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .degeneration import (DegenerationError, StratifiedDegeneration, Stratum,
                           pair_of_pants)
from .linalg import IntegerMatrix

__all__ = [
    "PatchworkError",
    "NotUnimodular",
    "NotATriangulation",
    "NotRegular",
    "UnsupportedPolygon",
    "PatchworkInput",
    "Convention",
    "ViroGraph",
    "validate_input",
    "lattice_points",
    "standard_triangulation",
    "harnack_signs",
    "harnack_patchwork",
    "to_sdd",
    "build_viro_graph",
    "viro_svg",
    "ORTHANTS",
]

# orthant index b0 + 2*b1  <->  eps = ((-1)^b0, (-1)^b1)
ORTHANTS = ((1, 1), (-1, 1), (1, -1), (-1, -1))


class PatchworkError(DegenerationError):
    pass


class NotUnimodular(PatchworkError):
    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(f"triangle {list(map(list, triangle))} is not unimodular")


class NotATriangulation(PatchworkError):
    pass


class NotRegular(PatchworkError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"heights are not strictly convex across edge "
                         f"{list(map(list, edge))}")


class UnsupportedPolygon(PatchworkError):
    pass





def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points) -> list:
    """Strict convex hull, counter-clockwise (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def lattice_points(polygon) -> list:
    """Sorted lattice points of the convex hull of ``polygon`` (boundary included)."""
    hull = _hull([tuple(map(int, v)) for v in polygon])
    xs = [v[0] for v in hull]
    ys = [v[1] for v in hull]
    out = []
    n = len(hull)
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            p = (x, y)
            if n <= 2:
                if n == 1 and p == hull[0] or n == 2 and _on_segment(p, *hull):
                    out.append(p)
            elif all(_cross(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n)):
                out.append(p)
    return out


@dataclass(frozen=True)
class PatchworkInput:
    """Polygon, triangulation, optional heights and signs.

    ``triangles`` hold lattice points directly.  ``heights`` and ``signs``
    are keyed by lattice point.
    """

    polygon: tuple
    triangles: tuple
    signs: Mapping
    heights: Optional[Mapping] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "polygon", tuple(tuple(map(int, v)) for v in self.polygon))
        object.__setattr__(self, "triangles",
                           tuple(sorted(tuple(sorted(tuple(map(int, v)) for v in t))
                                        for t in self.triangles)))
        object.__setattr__(self, "signs", {tuple(k): int(v) for k, v in self.signs.items()})
        if self.heights is not None:
            object.__setattr__(self, "heights",
                               {tuple(k): int(v) for k, v in self.heights.items()})

    @property
    def points(self) -> list:
        return lattice_points(self.polygon)

    def edges(self) -> dict:
        """Sorted edge -> sorted list of triangles containing it."""
        out = {}
        for t in self.triangles:
            for e in combinations(t, 2):
                out.setdefault(e, []).append(t)
        return {e: sorted(ts) for e, ts in sorted(out.items())}

    def sorted_triangles(self) -> list:
        return sorted(self.triangles)

    def to_json(self) -> dict:
        pts = self.points
        index = {p: i for i, p in enumerate(pts)}
        out = {
            "polygon": [list(v) for v in self.polygon],
            "triangles": [[index[v] for v in t] for t in self.sorted_triangles()],
            "signs": {f"{x},{y}": s for (x, y), s in sorted(self.signs.items())},
        }
        if self.heights is not None:
            out["heights"] = {f"{x},{y}": h for (x, y), h in sorted(self.heights.items())}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PatchworkInput":
        def key(k):
            if isinstance(k, str):
                x, y = k.split(",")
                return int(x), int(y)
            return tuple(int(c) for c in k)

        polygon = [tuple(v) for v in obj["polygon"]]
        pts = [tuple(p) for p in obj["points"]] if "points" in obj else lattice_points(polygon)
        tris = []
        for t in obj["triangles"]:
            if len(t) != 3:
                raise NotATriangulation(f"triangle {t} does not have 3 vertices")
            try:
                tris.append(tuple(pts[i] if isinstance(i, int) else tuple(i) for i in t))
            except IndexError:
                raise NotATriangulation(f"triangle {t} indexes past {len(pts)} points")
        heights = obj.get("heights")
        return cls(
            polygon=polygon,
            triangles=tris,
            signs={key(k): v for k, v in obj["signs"].items()},
            heights=None if heights is None else {key(k): v for k, v in heights.items()},
            name=str(obj.get("name", "")),
        )


def _det(t) -> int:
    a, b, c = t
    return _cross(a, b, c)


def _interiors_overlap(t1, t2) -> bool:
    """Separating-axis test on open triangles."""
    for tri, other in ((t1, t2), (t2, t1)):
        orient = 1 if _det(tri) > 0 else -1
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            if all(orient * _cross(a, b, p) <= 0 for p in other):
                return False
    return True


def _boundary_normal(edge, hull) -> Optional[tuple]:
    """Primitive normal of the side of ``hull`` containing ``edge``, or None."""
    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        if _on_segment(edge[0], a, b) and _on_segment(edge[1], a, b):
            dx, dy = b[0] - a[0], b[1] - a[1]
            g = np.gcd(dx, dy)
            return (int(dy // g), int(-dx // g))
    return None


def validate_input(pi: PatchworkInput) -> list:
    """Raise on the first violation; return a list of non-fatal flags."""
    flags = []
    hull = _hull(pi.polygon)
    if len(hull) < 3:
        raise NotATriangulation("polygon is degenerate")
    if set(hull) != set(pi.polygon):
        raise NotATriangulation("polygon vertices are not in convex position")
    pts = set(lattice_points(hull))
    for t in pi.triangles:
        if len(set(t)) != 3:
            raise NotATriangulation(f"triangle {t} repeats a vertex")
        if abs(_det(t)) != 1:
            raise NotUnimodular(t)
        for v in t:
            if v not in pts:
                raise NotATriangulation(f"vertex {v} lies outside the polygon")
    if len(set(pi.triangles)) != len(pi.triangles):
        raise NotATriangulation("repeated triangle")
    area2 = sum(_cross(hull[0], hull[i], hull[i + 1]) for i in range(1, len(hull) - 1))
    if len(pi.triangles) != area2:
        raise NotATriangulation(
            f"{len(pi.triangles)} unimodular triangles cannot tile area {area2}/2")
    tris = pi.sorted_triangles()
    for t1, t2 in combinations(tris, 2):
        if _interiors_overlap(t1, t2):
            raise NotATriangulation(f"triangles {t1} and {t2} overlap")
    for e, ts in pi.edges().items():
        if len(ts) > 2:
            raise NotATriangulation(f"edge {e} lies in {len(ts)} triangles")
        if len(ts) == 1 and _boundary_normal(e, hull) is None:
            raise NotATriangulation(f"edge {e} is free but not on the boundary")
    missing = pts - set(pi.signs)
    if missing:
        raise PatchworkError(f"no sign given at {sorted(missing)[0]}")
    if any(s not in (1, -1) for s in pi.signs.values()):
        raise PatchworkError("signs must be +1 or -1")
    if pi.heights is None:
        flags.append("regularity unverified")
    else:
        _check_regular(pi)
    if not _is_simplex(hull):
        flags.append("experimental: boundary identifications from edge normals")
    return flags


def _check_regular(pi: PatchworkInput) -> None:
    h = pi.heights
    for e, ts in pi.edges().items():
        if len(ts) != 2:
            continue
        t1, t2 = ts
        apex = next(v for v in t2 if v not in e)
        a, b, c = t1
        missing = [v for v in (a, b, c, apex) if v not in h]
        if missing:
            raise PatchworkError(f"no height given at {missing[0]}")
        # affine function through the lifted t1, evaluated at apex
        det = Fraction(_det(t1))
        l1 = Fraction(_cross(apex, b, c)) / det
        l2 = Fraction(_cross(a, apex, c)) / det
        l3 = 1 - l1 - l2
        if h[apex] <= l1 * h[a] + l2 * h[b] + l3 * h[c]:
            raise NotRegular(e)


def _is_simplex(hull) -> Optional[int]:
    """``d`` when ``hull`` is the standard simplex of size ``d``."""
    if len(hull) != 3:
        return None
    d = max(max(v) for v in hull)
    return d if d > 0 and set(hull) == {(0, 0), (d, 0), (0, d)} else None


def standard_triangulation(d: int) -> tuple:
    """Unit squares cut along the anti-diagonal, clipped to ``d * simplex``.

    Returns ``(triangles, heights)`` with the convex heights ``x^2 + xy + y^2``.
    """
    if d < 1:
        raise UnsupportedPolygon("degree must be at least 1")
    tris = []
    for x in range(d):
        for y in range(d - x):
            tris.append(((x, y), (x + 1, y), (x, y + 1)))
            if x + y + 2 <= d:
                tris.append(((x + 1, y), (x, y + 1), (x + 1, y + 1)))
    heights = {(x, y): x * x + x * y + y * y for x in range(d + 1) for y in range(d + 1 - x)}
    return tris, heights


def harnack_signs(polygon) -> dict:
    """Sign distribution producing an M-curve on the simplex of size ``d``.

    ``s(v) = (-1)^(v1 * v2)``.
    """
    d = _is_simplex(_hull([tuple(v) for v in polygon]))
    if d is None:
        raise UnsupportedPolygon("Harnack signs are defined on the simplex d*Delta only")
    return {(x, y): (-1) ** (x * y)
            for x in range(d + 1) for y in range(d + 1 - x)}


def harnack_patchwork(d: int) -> PatchworkInput:
    polygon = ((0, 0), (d, 0), (0, d))
    tris, heights = standard_triangulation(d)
    return PatchworkInput(polygon, tuple(tris), harnack_signs(polygon), heights,
                          name=f"harnack-d{d}")


# -- degeneration -------------------------------------------------------------

def _tid(t) -> str:
    return "t:" + ";".join(f"{x},{y}" for x, y in t)


def _eid(e) -> str:
    return "e:" + ";".join(f"{x},{y}" for x, y in e)


@dataclass(frozen=True)
class Convention:
    """Choices that should not affect cohomology.

    ``puncture_order[t]`` permutes the local labels of the three edges of
    triangle ``t``; ``edge_signs[e] = -1`` reverses the orientation of edge
    ``e`` in both complexes.
    """

    puncture_order: Mapping = field(default_factory=dict)
    edge_signs: Mapping = field(default_factory=dict)

    @classmethod
    def random(cls, pi: PatchworkInput, rng) -> "Convention":
        perms = {}
        for t in pi.triangles:
            order = [0, 1, 2]
            rng.shuffle(order)
            perms[t] = tuple(order)
        signs = {e: rng.choice((1, -1)) for e in pi.edges()}
        return cls(perms, signs)


_EBAR = ((1, 0), (0, 1), (-1, -1))


def to_sdd(pi: PatchworkInput, convention: Optional[Convention] = None,
           check: bool = True) -> StratifiedDegeneration:
    if check:
        validate_input(pi)
    conv = convention or Convention()
    edges = pi.edges()
    tris = pi.sorted_triangles()
    t_index = {t: i for i, t in enumerate(tris)}
    e_list = list(edges)
    interior = [e for e in e_list if len(edges[e]) == 2]

    strata = [Stratum(_eid(e), 0, len(edges[e]), (1,), 1, pure_ii=True) for e in e_list]
    strata += [pair_of_pants(_tid(t), 1) for t in tris]
    closure = [(_eid(e), _tid(t)) for e in e_list for t in edges[e]]

    nf, ne = len(tris), len(e_list)
    c0 = [[0] * ne for _ in range(2 * nf)]
    c0f2 = [[0] * ne for _ in range(2 * nf)]
    for j, e in enumerate(e_list):
        sign = conv.edge_signs.get(e, 1)
        for t in edges[e]:
            local = sorted(combinations(t, 2)).index(e)
            k = conv.puncture_order.get(t, (0, 1, 2))[local]
            i = t_index[t]
            for r in range(2):
                c0[2 * i + r][j] += sign * _EBAR[k][r]
                c0f2[2 * i + r][j] ^= _EBAR[k][r] & 1
    c1 = [[0] * len(interior) for _ in range(nf)]
    c1f2 = [[0] * len(interior) for _ in range(nf)]
    for j, e in enumerate(interior):
        sign = conv.edge_signs.get(e, 1)
        ta, tb = edges[e]
        c1[t_index[tb]][j] += sign
        c1[t_index[ta]][j] -= sign
        c1f2[t_index[tb]][j] ^= 1
        c1f2[t_index[ta]][j] ^= 1

    graph = build_viro_graph(pi, check=False)
    return StratifiedDegeneration(
        fiber_dim=1,
        strata=tuple(strata),
        closure=tuple(closure),
        cq_differentials={(0, 0): IntegerMatrix.from_rows(c0, ne),
                          (1, 0): IntegerMatrix.from_rows(c1, len(interior))},
        cq_differentials_f2={(0, 0): IntegerMatrix.from_rows(c0f2, ne),
                             (1, 0): IntegerMatrix.from_rows(c1f2, len(interior))},
        real_differentials={0: graph.incidence()},
        name=pi.name,
    )


# -- Viro graph ---------------------------------------------------------------

def _twisted(s, v, eps) -> int:
    return s * (eps[0] ** (v[0] & 1)) * (eps[1] ** (v[1] & 1))


@dataclass(frozen=True)
class ViroGraph:
    """Vertices ``(edge, orthant)`` and segments ``(triangle, orthant)``.

    Vertices and segments are listed in the basis order of the real complex:
    by edge (resp. triangle) in sorted order, then by orthant index.
    """

    vertices: tuple
    segments: tuple
    endpoints: tuple  # per segment, the pair of vertex indices

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def degrees(self) -> list:
        deg = [0] * len(self.vertices)
        for a, b in self.endpoints:
            deg[a] += 1
            deg[b] += 1
        return deg

    def is_union_of_cycles(self) -> bool:
        return all(k == 2 for k in self.degrees())

    def n_cycles(self) -> int:
        n = len(self.vertices)
        if n == 0:
            return 0
        rows = [a for a, _ in self.endpoints]
        cols = [b for _, b in self.endpoints]
        g = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        return int(connected_components(g, directed=False)[0])

    def incidence(self) -> IntegerMatrix:
        """Mod-2 map from vertices to segments: a vertex goes to its segments."""
        rows = [[0] * len(self.vertices) for _ in self.segments]
        for k, (a, b) in enumerate(self.endpoints):
            rows[k][a] ^= 1
            rows[k][b] ^= 1
        return IntegerMatrix.from_rows(rows, len(self.vertices))

    def to_json(self) -> dict:
        return {
            "vertices": [{"edge": [list(p) for p in e], "orthant": o} for e, o in self.vertices],
            "segments": [{"triangle": [list(p) for p in t], "orthant": o, "ends": list(ab)}
                         for (t, o), ab in zip(self.segments, self.endpoints)],
            "cycles": self.n_cycles(),
        }


def build_viro_graph(pi: PatchworkInput, check: bool = True) -> ViroGraph:
    if check:
        validate_input(pi)
    hull = _hull(pi.polygon)
    s = pi.signs
    edges = pi.edges()

    def crosses(e, o):
        eps = ORTHANTS[o]
        return _twisted(s[e[0]], e[0], eps) != _twisted(s[e[1]], e[1], eps)

    def canonical(e, o):
        if len(edges[e]) == 2:
            return o
        n = _boundary_normal(e, hull)
        partner = o ^ ((n[0] & 1) | ((n[1] & 1) << 1))
        return min(o, partner)

    vertices, vindex = [], {}
    for e in edges:
        for o in range(4):
            if crosses(e, o) and canonical(e, o) == o:
                vindex[(e, o)] = len(vertices)
                vertices.append((e, o))

    segments, endpoints = [], []
    for t in pi.sorted_triangles():
        for o in range(4):
            ends = [vindex[(e, canonical(e, o))]
                    for e in sorted(combinations(t, 2)) if crosses(e, o)]
            if ends:
                if len(ends) != 2:
                    raise PatchworkError(f"triangle {t} orthant {o} has {len(ends)} crossings")
                segments.append((t, o))
                endpoints.append(tuple(ends))
    return ViroGraph(tuple(vertices), tuple(segments), tuple(endpoints))


def viro_svg(pi: PatchworkInput, graph: Optional[ViroGraph] = None, scale: int = 40) -> str:
    """SVG of the curve drawn in the four reflected copies of the polygon."""
    graph = graph or build_viro_graph(pi)
    hull = _hull(pi.polygon)
    r = max(max(abs(c) for c in v) for v in hull) + 1
    size = 2 * r * scale

    def xy(p, o):
        e = ORTHANTS[o]
        return ((r + e[0] * p[0]) * scale, (r - e[1] * p[1]) * scale)

    def mid(e, o):
        (x0, y0), (x1, y1) = xy(e[0], o), xy(e[1], o)
        return (x0 + x1) / 2, (y0 + y1) / 2

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for o in range(4):
        pts = " ".join(f"{x:g},{y:g}" for x, y in (xy(v, o) for v in hull))
        out.append(f'<polygon points="{pts}" fill="none" stroke="#bbb"/>')
        for v, sgn in sorted(pi.signs.items()):
            x, y = xy(v, o)
            colour = "#c00" if _twisted(sgn, v, ORTHANTS[o]) > 0 else "#00c"
            out.append(f'<circle cx="{x:g}" cy="{y:g}" r="3" fill="{colour}"/>')
    for t, o in graph.segments:
        ends = [e for e in sorted(combinations(t, 2))
                if _twisted(pi.signs[e[0]], e[0], ORTHANTS[o])
                != _twisted(pi.signs[e[1]], e[1], ORTHANTS[o])]
        (x0, y0), (x1, y1) = mid(ends[0], o), mid(ends[1], o)
        out.append(f'<line x1="{x0:g}" y1="{y0:g}" x2="{x1:g}" y2="{y1:g}" '
                   f'stroke="black" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
