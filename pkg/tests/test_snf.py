import pytest
from hypothesis import given, settings, strategies as st

from acnielsen.snf import det, identity, invariant_factors, matmul, smith_normal_form


def _check(a):
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz
    for p, q in zip(nz, nz[1:]):
        assert q % p == 0
    return u, d, v


def test_diag_2_4_is_fixed():
    u, d, v = _check([[2, 0], [0, 4]])
    assert d == [[2, 0], [0, 4]] and u == identity(2) and v == identity(2)


def test_identity():
    assert _check([[1, 0], [0, 1]])[1] == identity(2)


def test_coprime_diagonal():
    assert _check([[2, 0], [0, 3]])[1] == [[1, 0], [0, 6]]


def test_invariant_factors_drop_units():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]


def test_det():
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[2, 0, 0], [0, 3, 0], [1, 1, 5]]) == 30


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda r: st.integers(1, 6).flatmap(
            lambda c: st.lists(st.lists(st.integers(-50, 50), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_random_matrices(a):
    _check(a)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_product_of_factors_is_abs_det(a):
    _, d, _ = smith_normal_form(a)
    prod = 1
    for i in range(4):
        prod *= d[i][i]
    assert prod == abs(det(a))
