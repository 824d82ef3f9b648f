import random

import numpy as np
import pytest

from realdegen import catalog
from realdegen.complexes import cohomology
from realdegen.main_complexes import build_cq, verdict
from realdegen.patchwork import (ORTHANTS, Convention, NotATriangulation,
                                 NotRegular, NotUnimodular, PatchworkInput,
                                 UnsupportedPolygon, build_viro_graph,
                                 harnack_patchwork, harnack_signs,
                                 lattice_points, standard_triangulation,
                                 to_sdd, validate_input, viro_svg)

from oracles import random_regular_triangulation

UNIT = ((0, 0), (1, 0), (0, 1))


def simplex_input(d, signs=None, tris=None, heights=None):
    poly = ((0, 0), (d, 0), (0, d))
    if tris is None:
        tris, heights = standard_triangulation(d)
    pts = lattice_points(poly)
    return PatchworkInput(poly, tris, signs or {p: 1 for p in pts}, heights)


def test_unit_triangle_valid():
    assert validate_input(PatchworkInput(UNIT, [UNIT], {p: 1 for p in UNIT})) == [
        "regularity unverified"]


def test_not_unimodular():
    poly = ((0, 0), (2, 0), (0, 1))
    pi = PatchworkInput(poly, [poly], {p: 1 for p in lattice_points(poly)})
    with pytest.raises(NotUnimodular):
        validate_input(pi)


def test_standard_3_is_regular():
    pi = simplex_input(3)
    assert len(pi.triangles) == 9
    assert validate_input(pi) == []


def test_missing_triangle():
    tris, h = standard_triangulation(2)
    with pytest.raises(NotATriangulation):
        validate_input(simplex_input(2, tris=tris[:-1], heights=h))


def test_overlap_detected():
    square = ((0, 0), (1, 0), (1, 1), (0, 1))
    tris = [((0, 0), (1, 0), (1, 1)), ((0, 0), (1, 0), (0, 1))]
    pi = PatchworkInput(square, tris, {p: 1 for p in square})
    with pytest.raises(NotATriangulation):
        validate_input(pi)


def test_concave_heights_rejected():
    tris, h = standard_triangulation(2)
    h = {p: -v for p, v in h.items()}
    with pytest.raises(NotRegular):
        validate_input(simplex_input(2, tris=tris, heights=h))


def test_harnack_needs_simplex():
    with pytest.raises(UnsupportedPolygon):
        harnack_signs(((0, 0), (1, 0), (1, 1), (0, 1)))
    assert harnack_signs(UNIT) == {(0, 0): 1, (1, 0): 1, (0, 1): 1}


def test_cubic_sdd_ranks():
    sdd = to_sdd(harnack_patchwork(3))
    c0, c1 = build_cq(sdd, 0), build_cq(sdd, 1)
    assert (c0.rank(0), c0.rank(1)) == (18, 18)
    assert (c1.rank(0), c1.rank(1)) == (9, 9)
    assert cohomology(c0).ranks() == {0: 1, 1: 1}
    assert cohomology(c1).ranks() == {0: 1, 1: 1}


def test_quartic_genus():
    sdd = to_sdd(harnack_patchwork(4))
    assert cohomology(build_cq(sdd, 0))[1].rank == 3
    assert cohomology(build_cq(sdd, 1))[0].rank == 3


def test_line():
    sdd = to_sdd(catalog.get_patchwork("line-d1"))
    c0, c1 = build_cq(sdd, 0), build_cq(sdd, 1)
    assert (c0.rank(0), c0.rank(1)) == (3, 2)
    assert cohomology(c0).ranks() == {0: 1, 1: 0}
    assert (c1.rank(0), c1.rank(1)) == (0, 1)
    assert cohomology(c1).ranks() == {0: 0, 1: 1}


def test_line_viro_graph():
    g = build_viro_graph(PatchworkInput(UNIT, [UNIT], {p: 1 for p in UNIT}))
    assert len(g.segments) == 3
    assert g.n_cycles() == 1 and g.is_union_of_cycles()


@pytest.mark.parametrize("d,b0", [(3, 2), (4, 4), (5, 7)])
def test_harnack_counts(d, b0):
    assert build_viro_graph(harnack_patchwork(d)).n_cycles() == b0


def _crossings_before_identification(pi):
    out = {}
    for e in pi.edges():
        out[e] = sum(
            1 for eps in ORTHANTS
            if pi.signs[e[0]] * eps[0] ** e[0][0] * eps[1] ** e[0][1]
            != pi.signs[e[1]] * eps[0] ** e[1][0] * eps[1] ** e[1][1])
    return out


def random_inputs(n=12, seed=3):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        d = int(rng.integers(1, 6))
        tris, h = random_regular_triangulation(d, rng)
        pts = lattice_points(((0, 0), (d, 0), (0, d)))
        signs = {p: int(rng.choice((1, -1))) for p in pts}
        yield d, PatchworkInput(((0, 0), (d, 0), (0, d)), tris, signs, h)


def test_random_inputs_validate():
    for _, pi in random_inputs():
        assert validate_input(pi) == []


def test_viro_graph_invariants():
    for d, pi in random_inputs():
        g = build_viro_graph(pi)
        assert g.is_union_of_cycles()
        assert len(g.segments) == 3 * len(pi.triangles)
        per_tri = {}
        for t, _ in g.segments:
            per_tri[t] = per_tri.get(t, 0) + 1
        assert set(per_tri.values()) == {3}
        assert set(_crossings_before_identification(pi).values()) == {2}
        edges = pi.edges()
        interior = sum(1 for ts in edges.values() if len(ts) == 2)
        assert g.n_vertices == 2 * interior + (len(edges) - interior)


def test_genus_and_bound_on_random_triangulations():
    for d, pi in random_inputs():
        g = (d - 1) * (d - 2) // 2
        r = verdict(to_sdd(pi))
        h = r.hodge()
        assert h[1][0] == h[0][1] == g
        assert sum(map(sum, h)) == 2 * g + 2
        assert r.betti_real[0] == r.betti_real[1] <= g + 1
        assert all(row["slack"] >= 0 for row in r.inequality)
        assert not r.violations


def test_convention_only_renames():
    pi = harnack_patchwork(3)
    conv = Convention.random(pi, random.Random(0))
    a, b = to_sdd(pi), to_sdd(pi, conv)
    assert a.cq_differentials != b.cq_differentials
    for q in (0, 1):
        assert cohomology(build_cq(a, q)) == cohomology(build_cq(b, q))


def test_json_round_trip():
    for name in catalog.PATCHWORK_NAMES:
        pi = catalog.get_patchwork(name)
        again = PatchworkInput.from_json(pi.to_json())
        assert again == pi


def test_json_explicit_points():
    obj = {"polygon": [[0, 0], [1, 0], [0, 1]], "points": [[1, 0], [0, 1], [0, 0]],
           "triangles": [[0, 1, 2]], "signs": {"0,0": 1, "1,0": -1, "0,1": 1}}
    pi = PatchworkInput.from_json(obj)
    assert pi.triangles == (tuple(sorted(UNIT)),) and pi.signs[(1, 0)] == -1


def test_json_bad_index():
    with pytest.raises(NotATriangulation):
        PatchworkInput.from_json({"polygon": [[0, 0], [1, 0], [0, 1]],
                                  "triangles": [[0, 1, 7]], "signs": {}})


def test_svg_line():
    svg = viro_svg(catalog.get_patchwork("line-d1"))
    assert svg.startswith("<svg") and svg.count("<line") == 3


def test_lattice_points_square():
    assert lattice_points(((0, 0), (2, 0), (2, 2), (0, 2))) == [
        (x, y) for x in range(3) for y in range(3)]


def test_non_simplex_flagged_experimental():
    square = ((0, 0), (1, 0), (1, 1), (0, 1))
    tris = [((0, 0), (1, 0), (1, 1)), ((0, 0), (0, 1), (1, 1))]
    pi = PatchworkInput(square, tris, {p: 1 for p in square},
                        {(0, 0): 0, (1, 0): 1, (0, 1): 1, (1, 1): 0})
    assert any("experimental" in f for f in validate_input(pi))
    g = build_viro_graph(pi)
    assert g.is_union_of_cycles()
