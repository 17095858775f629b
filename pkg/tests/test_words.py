import pytest
from hypothesis import given, strategies as st

from acnielsen.groups import AbelianGroup, HeisenbergGroup
from acnielsen.words import (
    Word,
    WordSyntaxError,
    commutator,
    evaluate_word,
    format_word,
    free_reduce,
    parse_word,
)

U_LETTERS = ((1, 1), (2, 1), (1, 1), (2, -1), (1, -1), (2, -1))

letters = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=30)


def test_parse_simple():
    assert parse_word("x1*x2^-1", 2).letters == ((1, 1), (2, -1))


def test_parse_identity():
    assert parse_word("1", 2).letters == ()


def test_parse_akbulut_kirby_u():
    assert parse_word("x1*x2*x1*x2^-1*x1^-1*x2^-1", 2).letters == U_LETTERS


def test_parse_commutator_and_powers():
    assert parse_word("[x1,x2]", 2).letters == ((1, -1), (2, -1), (1, 1), (2, 1))
    assert parse_word("(x1*x2)^-2", 2).letters == ((2, -1), (1, -1)) * 2
    # left-normed
    assert parse_word("[x1,x2,x1]", 2) == commutator(commutator(Word(2, ((1, 1),)), Word(2, ((2, 1),))), Word(2, ((1, 1),)))


@pytest.mark.parametrize("text", ["", "x3", "x1^", "x1*", "[x1]", "x1)", "y1", "x1^a"])
def test_parse_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text, 2)


def test_free_reduce_examples():
    assert free_reduce(Word(1, ((1, 1), (1, -1)))).letters == ()
    assert free_reduce(Word(2, ((1, 1), (2, 1), (2, -1), (1, 1)))).letters == ((1, 1), (1, 1))
    u = Word(2, U_LETTERS)
    assert free_reduce(u) == u and u.is_reduced()


def test_evaluate_in_z2():
    z2 = AbelianGroup((), 2)
    assert evaluate_word(Word(2, U_LETTERS), z2, [(1, 0), (0, 1)]) == (1, -1)
    assert evaluate_word(Word.empty(2), z2, [(3, 4), (5, 6)]) == (0, 0)


@pytest.mark.parametrize("m1,m2", [(0, 0), (4, -7), (-3, 2)])
def test_evaluate_heisenberg_commutator(m1, m2):
    h = HeisenbergGroup(1)
    assert evaluate_word(parse_word("[x1,x2]", 2), h, [(1, 0, m1), (0, 1, m2)]) == (0, 0, 1)


@given(letters)
def test_reduce_is_idempotent_and_reduced(ls):
    w = free_reduce(Word(3, tuple(ls)))
    assert w.is_reduced()
    assert free_reduce(w) == w


@given(letters)
def test_word_times_inverse_reduces_to_empty(ls):
    w = Word(3, tuple(ls))
    assert free_reduce(w * w.inverse()).letters == ()


@given(letters)
def test_format_parse_roundtrip(ls):
    w = Word(3, tuple(ls))
    assert parse_word(format_word(w), 3) == w


@given(letters, letters)
def test_evaluate_is_a_homomorphism(a, b):
    h = HeisenbergGroup(1)
    assign = [(1, 2, 0), (0, 1, 3), (-1, 1, 1)]
    u, v = Word(3, tuple(a)), Word(3, tuple(b))
    assert evaluate_word(u * v, h, assign) == h.mul(evaluate_word(u, h, assign), evaluate_word(v, h, assign))


@given(letters)
def test_exponent_sums_match_abelian_image(ls):
    z3 = AbelianGroup((), 3)
    w = Word(3, tuple(ls))
    assert list(evaluate_word(w, z3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])) == w.exponent_sums()


@given(letters)
def test_evaluation_ignores_free_reduction(ls):
    from acnielsen.groups import FreeNilpotentGroup
    from acnielsen.groups.library import quaternion

    w = Word(3, tuple(ls))
    q = quaternion()
    f = FreeNilpotentGroup(2, 3)
    for g, assign in (
        (HeisenbergGroup(1), [(1, 2, 0), (0, 1, 3), (-1, 1, 1)]),
        (q, [2, 4, 7]),
        (f, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (1, 1, 0, 2, 0)]),
        (AbelianGroup((4,), 1), [(1, 0), (0, 1), (3, -2)]),
    ):
        assert evaluate_word(w, g, assign) == evaluate_word(free_reduce(w), g, assign)
