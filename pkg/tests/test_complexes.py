import numpy as np
import pytest

from realdegen.complexes import (CochainComplex, Coefficient, FilteredComplex,
                                 InvalidComplex, NotASubcomplex, cohomology,
                                 reduce_mod2, spectral_sequence,
                                 universal_coefficients_check, validate)
from realdegen.linalg import IntegerMatrix

Z, F2 = Coefficient.Z, Coefficient.F2


def M(rows, cols=None):
    return IntegerMatrix.from_rows(rows, cols)


def times_two():
    return CochainComplex(Z, (0, 1), {0: 1, 1: 1}, {0: M([[2]])})


def test_validate():
    validate(times_two())
    validate(CochainComplex(Z, (0, 2), {}))
    bad = CochainComplex(Z, (0, 2), {0: 1, 1: 1, 2: 1}, {0: M([[1]]), 1: M([[1]])})
    with pytest.raises(InvalidComplex) as exc:
        validate(bad)
    assert exc.value.degree == 0


def test_shape_checked_on_construction():
    with pytest.raises(ValueError):
        CochainComplex(Z, (0, 1), {0: 2, 1: 1}, {0: M([[1]])})


def test_cohomology_times_two():
    h = cohomology(times_two())
    assert (h[0].rank, h[0].torsion) == (0, ())
    assert (h[1].rank, h[1].torsion) == (0, (2,))
    assert not h.torsion_free


def test_circle():
    h = cohomology(CochainComplex(Z, (0, 1), {0: 1, 1: 1}))
    assert h.ranks() == {0: 1, 1: 1}


def test_triangle_over_f2():
    d = M([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    h = cohomology(CochainComplex(F2, (0, 1), {0: 3, 1: 3}, {0: d}))
    assert h.ranks() == {0: 1, 1: 1}


def test_reduce_mod2():
    r = reduce_mod2(times_two())
    assert r.coefficient is F2 and r.differential(0).is_zero()
    r = reduce_mod2(CochainComplex(Z, (0, 1), {0: 2, 1: 1}, {0: M([[3, 1]])}))
    assert r.differential(0).to_rows() == [[1, 1]]
    e = reduce_mod2(CochainComplex(Z, (0, 0), {}))
    assert e.ranks == {0: 0}


def test_universal_coefficients_examples():
    assert universal_coefficients_check(times_two()).ranks() == {0: 1, 1: 1}
    c = CochainComplex(Z, (0, 2), {0: 2, 1: 3, 2: 1})
    assert universal_coefficients_check(c).ranks() == {0: 2, 1: 3, 2: 1}


def test_json_round_trip():
    c = CochainComplex(Z, (0, 1), {0: 2, 1: 1}, {0: M([[3, 1]])}, {0: ["a", "b"], 1: ["c"]})
    assert CochainComplex.from_json(c.to_json()) == c


def test_euler_characteristic_matches():
    c = CochainComplex(Z, (0, 1), {0: 3, 1: 2}, {0: M([[1, 0, -1], [0, 1, -1]])})
    assert c.euler_characteristic() == cohomology(c).euler_characteristic() == 1


# -- spectral sequences ----------------------------------------------------------

def two_step():
    base = CochainComplex(F2, (0, 1), {0: 2, 1: 1}, {0: M([[1, 0]])})
    f1 = {0: np.array([[0], [1]], dtype=np.uint8), 1: np.eye(1, dtype=np.uint8)}
    return FilteredComplex(base, [f1])


def test_trivial_filtration_is_stable_at_e1():
    base = CochainComplex(F2, (0, 1), {0: 2, 1: 1}, {0: M([[1, 0]])})
    pages = spectral_sequence(FilteredComplex(base, []))
    assert len(pages) == 1 and pages[0].stable
    assert pages[0].nonzero() == {(0, 0): 1}


def test_two_step_filtration():
    pages = spectral_sequence(two_step())
    assert pages[0].nonzero() == {(0, 0): 1, (1, -1): 1, (1, 0): 1}
    last = pages[-1]
    assert last.stable
    assert (last.total(0), last.total(1)) == (1, 0)


def test_whole_complex_at_every_level():
    base = CochainComplex(F2, (0, 1), {0: 2, 1: 1}, {0: M([[1, 0]])})
    full = {0: np.eye(2, dtype=np.uint8), 1: np.eye(1, dtype=np.uint8)}
    f = FilteredComplex(base, [full, full])
    g = f.graded_dims()
    assert g[(0, 0)] == g[(0, 1)] == g[(1, 0)] == g[(1, 1)] == 0
    assert (g[(2, 0)], g[(2, 1)]) == (2, 1)


def test_not_a_subcomplex():
    base = CochainComplex(F2, (0, 1), {0: 2, 1: 1}, {0: M([[1, 0]])})
    f1 = {0: np.array([[1], [0]], dtype=np.uint8)}
    with pytest.raises(NotASubcomplex) as exc:
        FilteredComplex(base, [f1])
    assert (exc.value.level, exc.value.degree) == (1, 0)


def test_levels_must_nest():
    base = CochainComplex(F2, (0, 0), {0: 2})
    with pytest.raises(NotASubcomplex):
        FilteredComplex(base, [{0: np.array([[1], [0]], dtype=np.uint8)},
                               {0: np.array([[0], [1]], dtype=np.uint8)}])


def test_filtration_requires_f2():
    with pytest.raises(ValueError):
        FilteredComplex(times_two(), [])


def test_spectral_sequence_converges_on_random_filtrations():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n0, n1 = rng.integers(1, 5, size=2)
        d = rng.integers(0, 2, size=(n1, n0))
        base = CochainComplex(F2, (0, 1), {0: int(n0), 1: int(n1)},
                              {0: IntegerMatrix.from_array(d)})
        # a random flag in degree 0, pushed forward to make it a subcomplex
        levels = []
        k = int(n0)
        for _ in range(3):
            k = int(rng.integers(0, k + 1))
            v0 = np.eye(n0, dtype=np.uint8)[:, :k]
            img = (d @ v0) % 2
            levels.append({0: v0, 1: img.astype(np.uint8)})
        f = FilteredComplex(base, levels)
        pages = spectral_sequence(f)
        h = cohomology(base)
        assert pages[-1].total(0) == h[0].rank
        assert pages[-1].total(1) == h[1].rank
