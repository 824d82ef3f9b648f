import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realdegen.linalg import (IntegerMatrix, in_span_mod2, kernel_basis_mod2,
                              rank_mod2, smith_normal_form, span_rank_mod2)

from oracles import determinantal_factors, rank_gf2


def M(rows, cols=None):
    return IntegerMatrix.from_rows(rows, cols)


@pytest.mark.parametrize("rows,factors", [
    ([[2, 4], [6, 8]], (2, 4)),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)),
    ([[0, 0, 0], [0, 0, 0]], ()),
    ([[2]], (2,)),
])
def test_snf_examples(rows, factors):
    sf = smith_normal_form(M(rows))
    assert sf.invariant_factors == factors
    assert sf.rank == len(factors)


def test_snf_empty_shapes():
    for r, c in [(0, 0), (0, 4), (3, 0)]:
        assert smith_normal_form(IntegerMatrix.zeros(r, c)).invariant_factors == ()


def test_torsion_property():
    assert smith_normal_form(M([[2, 4], [6, 8]])).torsion == (2, 4)
    assert smith_normal_form(M([[1, 0], [0, 3]])).torsion == (3,)


def test_big_entries_do_not_overflow():
    big = 10 ** 30
    sf = smith_normal_form(M([[big, 0], [0, big * 3]]))
    assert sf.invariant_factors == (big, 3 * big)


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_transforms_reconstruct_diagonal(rows):
    m = M(rows)
    sf = smith_normal_form(m, with_transforms=True)
    d = sf.left_transform @ m @ sf.right_transform
    for i in range(m.rows):
        for j in range(m.cols):
            want = sf.invariant_factors[i] if i == j and i < sf.rank else 0
            assert d[i, j] == want
    for a, b in zip(sf.invariant_factors, sf.invariant_factors[1:]):
        assert b % a == 0


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_matches_minors(rows):
    assert smith_normal_form(M(rows)).invariant_factors == determinantal_factors(rows)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_mod2_counts_odd_factors(rows):
    m = M(rows)
    odd = sum(1 for f in smith_normal_form(m).invariant_factors if f % 2)
    assert rank_mod2(m) == odd == rank_gf2(rows)


def test_snf_is_deterministic():
    m = M([[3, 5, 7], [2, 4, 6], [1, 1, 8]])
    a = smith_normal_form(m, with_transforms=True)
    b = smith_normal_form(m, with_transforms=True)
    assert a == b


@pytest.mark.parametrize("rows,cols,expected", [
    ([[2, 4], [6, 8]], None, 0),
    ([[1, 1], [1, 1]], None, 1),
    ([], 5, 0),
])
def test_rank_mod2_examples(rows, cols, expected):
    assert rank_mod2(M(rows, cols)) == expected


def test_kernel_examples():
    k = kernel_basis_mod2(M([[1, 1]]))
    assert [list(v) for v in k] == [[1, 1]]
    assert kernel_basis_mod2(IntegerMatrix.identity(2)) == []
    assert len(kernel_basis_mod2(IntegerMatrix.zeros(1, 3))) == 3


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_kernel_is_kernel(rows):
    m = M(rows)
    a = np.array(rows, dtype=np.int64) % 2
    basis = kernel_basis_mod2(m)
    assert len(basis) == m.cols - rank_mod2(m)
    for v in basis:
        assert not ((a @ v.astype(np.int64)) % 2).any()


def test_span_helpers():
    e = np.eye(3, dtype=np.uint8)
    assert span_rank_mod2([e[0], e[1], e[0] ^ e[1]]) == 2
    assert span_rank_mod2([]) == 0
    assert in_span_mod2(e[:, :2], (e[0] ^ e[1]).reshape(3, 1))
    assert not in_span_mod2(e[:, :2], e[2].reshape(3, 1))


def test_json_round_trip_and_errors():
    m = M([[1, -2], [3, 4]])
    assert IntegerMatrix.from_json(m.to_json()) == m
    assert IntegerMatrix.from_json([[1, -2], [3, 4]]) == m
    assert IntegerMatrix.from_json({"rows": 0, "cols": 2, "entries": []}).shape == (0, 2)
    with pytest.raises(ValueError):
        IntegerMatrix.from_json({"rows": 2, "cols": 2, "entries": [[1, 2]]})
    with pytest.raises(ValueError):
        M([[1, 2], [3]])
