import pytest

from realdegen import catalog
from realdegen.complexes import NotASubcomplex, cohomology
from realdegen.degeneration import (DegenerationError, HypothesisViolated,
                                    StratifiedDegeneration, Stratum,
                                    point_stratum)
from realdegen.linalg import IntegerMatrix
from realdegen.main_complexes import (MissingBlock, ShapeMismatch,
                                      augmentation_filtration, build_cq,
                                      build_cq_f2, build_real_complex,
                                      check_sdd, filtration_level_map,
                                      q_range, verdict)


def M(rows, cols=None):
    return IntegerMatrix.from_rows(rows, cols)


@pytest.fixture
def untwisted():
    return catalog.get_sdd("elliptic-cycle-3-untwisted")


@pytest.fixture
def twisted():
    return catalog.get_sdd("elliptic-cycle-3-twisted")


def test_elliptic_c0(untwisted):
    c = build_cq(untwisted, 0)
    assert (c.rank(0), c.rank(1)) == (3, 3)
    # U_k is punctured at N_{k-1} (+1) and N_k (-1)
    assert c.differential(0).to_rows() == [[-1, 0, 1], [1, -1, 0], [0, 1, -1]]
    h = cohomology(c)
    assert (h[0].rank, h[1].rank) == (1, 1) and h.torsion_free


def test_elliptic_c1(untwisted):
    c = build_cq(untwisted, 1)
    assert (c.rank(0), c.rank(1)) == (3, 3)
    h = cohomology(c)
    assert (h[0].rank, h[1].rank) == (1, 1)


def test_labels(untwisted):
    assert build_cq(untwisted, 1).labels[0] == ("N0:1:0", "N1:1:0", "N2:1:0")


def test_single_point():
    sdd = StratifiedDegeneration(0, (point_stratum("p", 1),))
    c = build_cq(sdd, 0)
    assert c.ranks == {0: 1}
    assert cohomology(c)[0].rank == 1
    rc = build_real_complex(sdd)
    assert cohomology(rc.complex)[0].rank == 1


def test_real_complexes(untwisted, twisted):
    for sdd, b in ((untwisted, 2), (twisted, 1)):
        rc = build_real_complex(sdd)
        assert (rc.complex.rank(0), rc.complex.rank(1)) == (6, 6)
        h = cohomology(rc.complex)
        assert (h[0].rank, h[1].rank) == (b, b)


def test_trivial_p1():
    r = verdict(catalog.get_sdd("trivial-p1-toric"))
    assert r.betti_real == [1, 1]
    assert r.hodge() == [[1, 0], [0, 1]]


def test_q_range(untwisted):
    assert list(q_range(untwisted)) == [0, 1]
    assert filtration_level_map(untwisted) == {0: 1, 1: 0}


def test_shape_mismatch(untwisted):
    bad = StratifiedDegeneration(
        1, untwisted.strata, untwisted.closure,
        {**untwisted.cq_differentials, (0, 0): M([[1, 0], [0, 1]])},
        untwisted.real_differentials)
    with pytest.raises(ShapeMismatch) as exc:
        build_cq(bad, 0)
    assert exc.value.degree == 0


def test_missing_block(untwisted):
    d = dict(untwisted.cq_differentials)
    del d[(1, 0)]
    bad = StratifiedDegeneration(1, untwisted.strata, untwisted.closure, d,
                                 untwisted.real_differentials)
    with pytest.raises(MissingBlock):
        build_cq(bad, 1)
    ok = StratifiedDegeneration(1, untwisted.strata, untwisted.closure, d,
                                untwisted.real_differentials, zero_blocks_ok=True)
    assert cohomology(build_cq(ok, 1)).ranks() == {0: 3, 1: 3}


def test_real_complex_refused_without_b():
    s = Stratum("u", 1, 1, (0, 1, 1), 1, pure_ii=True)
    sdd = StratifiedDegeneration(1, (s,))
    with pytest.raises(HypothesisViolated):
        build_real_complex(sdd)
    assert build_real_complex(sdd, force=True).complex.rank(1) == 1
    r = verdict(sdd)
    assert not r.theorem_applicable
    assert "theorem not applicable" in r.to_markdown()


def test_torsion_needs_f2_blocks():
    s = Stratum("x", 0, 1, (1,), 1, pure_ii=True)
    t = Stratum("y", 1, 1, (0, 1, 1), 3, hc_torsion=((), (2,), ()))
    sdd = StratifiedDegeneration(1, (s, t), (("x", "y"),),
                                 {(0, 0): M([[2]])}, zero_blocks_ok=True)
    with pytest.raises(DegenerationError):
        build_cq_f2(sdd, 0)
    with_f2 = StratifiedDegeneration(1, (s, t), (("x", "y"),), {(0, 0): M([[2]])},
                                     cq_differentials_f2={(0, 0): M([[0], [0]])},
                                     zero_blocks_ok=True)
    assert build_cq_f2(with_f2, 0).rank(1) == 2


def test_node_block_filtration():
    sdd = StratifiedDegeneration(0, (point_stratum("n", 2),))
    rc = build_real_complex(sdd)
    f = augmentation_filtration(sdd, rc)
    assert f.level(0, 0).shape[1] == 2
    assert [list(v) for v in f.level(1, 0).T] == [[1, 1]]
    assert f.level(2, 0).shape[1] == 0


def test_boundary_block_filtration():
    sdd = StratifiedDegeneration(0, (point_stratum("b", 1),))
    f = augmentation_filtration(sdd, build_real_complex(sdd))
    assert f.depth == 0 and f.level(0, 0).shape[1] == 1


def test_elliptic_graded_dims(untwisted):
    f = augmentation_filtration(untwisted, build_real_complex(untwisted))
    g = f.graded_dims()
    assert (g[(0, 0)], g[(0, 1)]) == (3, 3)
    assert (g[(1, 0)], g[(1, 1)]) == (3, 3)


def test_deck_breaking_gluing_is_not_a_subcomplex(untwisted):
    d = untwisted.real_differentials[0].to_rows()
    d[1][0] ^= 1  # sheet s_0^0 also meets arc a_0^1
    bad = StratifiedDegeneration(1, untwisted.strata, untwisted.closure,
                                 untwisted.cq_differentials, {0: M(d)})
    with pytest.raises(NotASubcomplex):
        augmentation_filtration(bad, build_real_complex(bad))
    assert any("filtration" in v for v in verdict(bad).violations)


def test_verdict_untwisted(untwisted):
    r = verdict(untwisted)
    j = r.to_json()
    assert j["betti_real"] == [2, 2]
    assert j["h"] == [[1, 1], [1, 1]]
    assert [x["slack"] for x in j["inequality"]] == [0, 0]
    assert j["flags"]["maximal"] and j["flags"]["torsion_free"]
    assert j["cq"]["1,0"] == {"rank": 1, "torsion": [], "mod2": 1}
    assert not r.violations


def test_verdict_twisted(twisted):
    j = verdict(twisted).to_json()
    assert j["betti_real"] == [1, 1]
    assert j["h"] == [[1, 1], [1, 1]]
    assert [x["slack"] for x in j["inequality"]] == [1, 1]
    assert j["flags"]["maximal"] is False


def test_coefficient_selection(untwisted):
    r = verdict(untwisted)
    assert "h" not in r.to_json("f2")
    assert "mod2" not in r.to_json("z")["cq"]["0,0"]
    md = r.to_markdown()
    assert "| 0 | 2 | 2 | 0 |" in md


def test_check_sdd_clean(untwisted):
    assert check_sdd(untwisted) == []


def test_inequality_violation_is_flagged(untwisted):
    # a real differential that is zero makes b_p exceed the bound
    bad = StratifiedDegeneration(1, untwisted.strata, untwisted.closure,
                                 untwisted.cq_differentials,
                                 {0: IntegerMatrix.zeros(6, 6)})
    r = verdict(bad)
    assert r.betti_real == [6, 6]
    assert any("exceeds" in v for v in r.violations)
