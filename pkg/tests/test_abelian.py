import pytest
from hypothesis import assume, given, settings, strategies as st

from acnielsen.abelian import (
    abelian_reduce,
    canonical_tuple,
    euler_phi,
    nielsen_det_invariant,
    predicted_components,
)
from acnielsen.groups import AbelianForm, AbelianGroup, GroupError
from acnielsen.moves import Move
from acnielsen.snf import det
from acnielsen.structure import generates

import oracle


def _group(torsion, free=0):
    return AbelianGroup(tuple(torsion), free)


def test_euler_phi():
    assert [euler_phi(m) for m in (1, 2, 5, 12, 36, 97)] == [1, 1, 4, 4, 12, 96]


def test_predicted_examples():
    assert predicted_components(AbelianForm((5,), 0), 1) == 2
    assert predicted_components(AbelianForm((2, 4), 0), 2) == 1
    assert predicted_components(AbelianForm((), 3), 3) == 1
    assert predicted_components(AbelianForm((3, 3), 0), 1) == "empty"
    assert predicted_components(AbelianForm((5, 5), 0), 2) == 2
    assert predicted_components(AbelianForm((7,), 1), 2) == 3


def test_predicted_accepts_group():
    assert predicted_components(_group([12]), 1) == 2


CASES = [((m,), n) for m in range(2, 13) for n in (1, 2)] + [
    ((2, 2), 2), ((2, 2), 3), ((3, 3), 2), ((3, 3), 3), ((4, 4), 2), ((2, 4), 2), ((5, 5), 2), ((2, 6), 2), ((3, 6), 2),
]


@pytest.mark.parametrize("torsion,n", CASES, ids=lambda v: str(v))
def test_prediction_matches_brute_force(torsion, n):
    comps = oracle.components(_group(torsion), n)
    assert len(comps) == predicted_components(AbelianForm(torsion, 0), n)


@pytest.mark.parametrize("torsion", [(m,) for m in range(3, 13)] + [(3, 3), (4, 4), (5, 5), (3, 6)], ids=str)
def test_det_invariant_is_a_complete_invariant(torsion):
    g = _group(torsion)
    comps = oracle.components(g, len(torsion))
    labels = [{nielsen_det_invariant(g.form, t) for t in c} for c in comps]
    assert all(len(s) == 1 for s in labels)
    assert len({next(iter(s)) for s in labels}) == len(comps)


def test_det_invariant_examples():
    z5 = AbelianForm((5,), 0)
    assert nielsen_det_invariant(z5, [(2,)]) == (2, 3)
    assert nielsen_det_invariant(z5, [(1,)]) == (1, 4)
    assert nielsen_det_invariant(AbelianForm((3, 3), 0), [(1, 0), (0, 1)]) == (1, 2)


def test_det_invariant_preconditions():
    with pytest.raises(GroupError):
        nielsen_det_invariant(AbelianForm((5,), 0), [(1,), (0,)])
    with pytest.raises(GroupError):
        nielsen_det_invariant(AbelianForm((2, 4), 0), [(1, 0), (0, 1)])
    with pytest.raises(GroupError):
        nielsen_det_invariant(AbelianForm((5,), 0), [(0,)])
    with pytest.raises(GroupError):
        nielsen_det_invariant(AbelianForm((), 2), [(1, 0), (0, 1)])


def test_reduce_examples():
    z2 = _group([], 2)
    cert = abelian_reduce(z2, [(1, 1), (0, 1)])
    assert list(cert.moves) == [Move.R(1, 2, -1)] and cert.target == ((1, 0), (0, 1))
    cert = abelian_reduce(_group([5]), [(2,), (0,)])
    assert cert.target == ((1,), (0,))
    cert = abelian_reduce(_group([2, 2]), [(1, 1), (0, 1)])
    assert cert.target == ((1, 0), (0, 1))


def test_reduce_rejects_non_generating():
    with pytest.raises(GroupError):
        abelian_reduce(_group([4]), [(2,), (2,)])


def test_canonical_tuple():
    assert canonical_tuple(AbelianForm((5,), 0), 2, 2) == ((2,), (0,))
    assert canonical_tuple(AbelianForm((), 2), 3) == ((1, 0), (0, 1), (0, 0))


def _tuples(g, n):
    coord = [st.integers(0, m - 1) if m else st.integers(-6, 6) for m in g.form.moduli]
    return st.lists(st.tuples(*coord), min_size=n, max_size=n).filter(lambda t: generates(g, t))


@st.composite
def generating_tuples(draw, extra=2):
    torsion = draw(st.sampled_from([(), (5,), (2, 4), (3, 3), (7,), (3, 6), (4, 12)]))
    free = draw(st.integers(0, 2 if not torsion else 1))
    assume(torsion or free)
    g = _group(torsion, free)
    n = draw(st.integers(g.form.rank, g.form.rank + extra))
    return g, draw(_tuples(g, n))


@settings(max_examples=120, deadline=None)
@given(generating_tuples())
def test_reduce_certificate_replays_to_canonical(case):
    g, t = case
    cert = abelian_reduce(g, t)
    residue = cert.metadata["residue"]
    assert cert.target == canonical_tuple(g.form, len(t), residue)
    if len(t) > g.form.rank or not g.form.torsion or g.form.torsion[0] == 2:
        assert residue == 1
    else:
        m1 = g.form.torsion[0]
        assert 2 * residue <= m1
        d = det(t) % m1
        assert residue in (d, -d % m1)
        if not g.form.free_rank:
            assert residue in nielsen_det_invariant(g.form, t)


@settings(max_examples=60, deadline=None)
@given(generating_tuples(extra=1), st.data())
def test_same_target_composes_into_a_path(case, data):
    g, s = case
    t = data.draw(_tuples(g, len(s)))
    ca, cb = abelian_reduce(g, s), abelian_reduce(g, t)
    if ca.target == cb.target:
        joined = ca.then(cb.inverse())
        assert joined.source == tuple(map(tuple, s)) and joined.target == tuple(map(tuple, t))
