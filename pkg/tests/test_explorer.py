import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from acnielsen import kernels
from acnielsen._accel import HAVE_NUMBA
from acnielsen.abelian import predicted_components
from acnielsen.explorer import (
    BudgetExceeded,
    GraphQuery,
    components,
    export_graph,
    find_path,
    move_table,
    verify_preimage_theorem,
)
from acnielsen.groups import AbelianGroup, GroupError
from acnielsen.groups.library import (
    abelian_table,
    cyclic,
    dihedral,
    heisenberg_table,
    quaternion,
    standard_corpus,
    symmetric,
)
from acnielsen.structure import generates

import oracle

Q8 = quaternion()
D4 = dihedral(4)
S3 = symmetric(3)
HEIS3 = heisenberg_table(3)
Z5 = AbelianGroup((5,), 0)
BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


def _partition(report):
    """Components as a set of frozensets of tuples, recovered through component_id."""
    g = report.query.group
    from itertools import product

    blocks = {}
    for t in product(list(g.elements()), repeat=report.query.n):
        cid = report.component_id(t)
        if cid is not None:
            blocks.setdefault(cid, set()).add(tuple(t))
    return {frozenset(b) for b in blocks.values()}


def _chains(order, lo=2):
    # invariant factor lists m1 | m2 | ... with product ``order``
    if order == 1:
        yield ()
        return
    for m in range(lo, order + 1):
        if order % m:
            continue
        for rest in _chains(order // m, m):
            if all(r % m == 0 for r in rest):
                yield (m,) + rest


def test_components_examples():
    rep = components(GraphQuery(Z5, 1))
    assert rep.component_count == 2
    assert _partition(rep) == {frozenset({((1,),), ((4,),)}), frozenset({((2,),), ((3,),)})}
    assert components(GraphQuery(Q8, 2, "ac")).component_count == 1
    assert components(GraphQuery(Z5, 2)).component_count == 1


def test_empty_vertex_set():
    rep = components(GraphQuery(abelian_table([3, 3]), 1))
    assert rep.vertex_count == 0 and rep.component_count == 0


def test_find_path_examples():
    i, j = Q8.index["i"], Q8.index["j"]
    q = GraphQuery(Q8, 2, "ac")
    assert len(find_path(q, (i, j), (i, j))) == 0
    cert = find_path(q, (i, j), (j, i))
    assert cert.source == (i, j) and cert.target == (j, i)
    assert find_path(GraphQuery(Z5, 1), [(1,)], [(2,)]) is None


def test_find_path_rejects_non_vertices():
    with pytest.raises(GroupError):
        find_path(GraphQuery(Q8, 2), (0, 0), (2, 4))


@pytest.mark.parametrize("backend", BACKENDS)
def test_find_path_is_shortest(backend):
    # BFS distances from the oracle's point of view: path length equals graph distance
    q = GraphQuery(S3, 2)
    src = (1, 2)
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for t in frontier:
            for u in oracle.neighbours(S3, t, "nielsen", ()):
                if u not in dist:
                    dist[u] = dist[t] + 1
                    nxt.append(u)
        frontier = nxt
    for t, d in dist.items():
        assert len(find_path(q, src, t, backend=backend)) == d


def test_preimage_examples():
    for g in (Q8, D4):
        res = verify_preimage_theorem(g, 2)
        assert res["holds"] and res["detail"]["components"] == 1


def test_preimage_flags_n1():
    res = verify_preimage_theorem(cyclic(5), 1)
    assert not res["detail"]["within_hypotheses"] and "note" in res["detail"]


def test_preimage_reports_class_c_flag():
    # S3 is not nilpotent; the statement is not expected to hold and the checker must notice
    res = verify_preimage_theorem(S3, 1)
    assert not res["detail"]["class_C"]


def test_budget():
    with pytest.raises(BudgetExceeded) as err:
        components(GraphQuery(Q8, 3), budget=100)
    assert err.value.required == 512


def test_export_z3():
    doc = json.loads(export_graph(GraphQuery(cyclic(3), 1)))
    assert doc["vertex_count"] == 2 and doc["edge_count"] == 1
    dot = export_graph(GraphQuery(cyclic(3), 1), "dot")
    assert dot.startswith("graph nielsen {") and "v0 -- v1;" in dot


def test_export_empty():
    doc = json.loads(export_graph(GraphQuery(abelian_table([2, 2]), 1)))
    assert doc["vertex_count"] == 0 and doc["edges"] == [] and doc["vertices"] == []


def test_export_q8_counts_match_enumeration():
    doc = json.loads(export_graph(GraphQuery(Q8, 2, "ac")))
    elems = list(Q8.elements())
    assert doc["vertex_count"] == sum(generates(Q8, (a, b)) for a in elems for b in elems) == 24
    # edges against the oracle's neighbourhoods, loops removed
    edges = set()
    for a in elems:
        for b in elems:
            if generates(Q8, (a, b)):
                for u in oracle.neighbours(Q8, (a, b), "ac", elems):
                    if u != (a, b):
                        edges.add(frozenset({(a, b), u}))
    assert doc["edge_count"] == len(edges)


GRAPHS = [
    (Q8, 2, "nielsen"), (Q8, 2, "ac"), (Q8, 3, "nielsen"), (D4, 2, "ac"), (D4, 2, "nielsen"),
    (S3, 1, "ac"), (S3, 2, "nielsen"), (S3, 2, "ac"), (HEIS3, 2, "nielsen"), (cyclic(6), 2, "nielsen"),
    (abelian_table([2, 4]), 2, "nielsen"), (abelian_table([3, 3]), 2, "ac"),
]


@pytest.mark.parametrize("g,n,mode", GRAPHS, ids=lambda v: str(v))
def test_components_match_oracle(g, n, mode):
    expect = set(oracle.components(g, n, mode))
    for backend in BACKENDS:
        rep = components(GraphQuery(g, n, mode), backend=backend)
        assert rep.component_count == len(expect)
        assert rep.vertex_count == sum(len(c) for c in expect)
        assert _partition(rep) == expect


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("g,n,mode", GRAPHS + [(heisenberg_table(5), 2, "ac")], ids=lambda v: str(v))
def test_backends_agree_bitwise(g, n, mode):
    tg = g
    normal = mode == "ac"
    conj = tuple(a for a in range(tg.n) if a != tg.e) if normal else ()
    moves = move_table(n, conj, tg.inverse)
    out = {}
    for b in ("numba", "numpy"):
        mask = kernels.membership_mask(tg.table, tg.inverse, n, tg.generating_set if normal else None, normal, b)
        rep = kernels.component_minima(tg.table, tg.inverse, n, mask, moves, b)
        out[b] = (mask, rep)
    assert np.array_equal(out["numba"][0], out["numpy"][0])
    assert np.array_equal(out["numba"][1], out["numpy"][1])


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_bfs_backends_agree():
    tg = D4
    moves = move_table(2)
    src = kernels.encode([1, 2], tg.n)
    for dst in range(tg.n**2):
        p1, v1 = kernels.bfs_tree(tg.table, tg.inverse, 2, moves, src, dst, "numba")
        p2, v2 = kernels.bfs_tree(tg.table, tg.inverse, 2, moves, src, dst, "numpy")
        assert (p1[dst] >= 0) == (p2[dst] >= 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8**3 - 1), st.integers(0, 8))
def test_encode_decode(code, _):
    t = kernels.decode(code, 8, 3)
    assert kernels.encode(t, 8) == code
    assert kernels.decode_many(np.array([code]), 8, 3)[0].tolist() == list(t)


@pytest.mark.parametrize(
    "g,n",
    [(g, 2) for g in standard_corpus().values()] + [(Q8, 3), (cyclic(7), 2), (heisenberg_table(5), 2)],
    ids=str,
)
def test_generating_conjugators_give_same_components(g, n):
    full = components(GraphQuery(g, n, "ac", tuple(g.elements())))
    gens = components(GraphQuery(g, n, "ac", tuple(g.generating_set)))
    assert _partition(full) == _partition(gens)


def test_conjugator_set_needs_ac():
    with pytest.raises(GroupError):
        GraphQuery(Q8, 2, "nielsen", (1,))


def test_large_group_uses_generating_conjugators():
    rep = components(GraphQuery(heisenberg_table(5), 2, "ac"))
    assert rep.component_count == 2
    assert rep.metadata["conjugators"] <= 3 and rep.metadata["logs"]


def test_prediction_matches_bfs_for_all_small_abelian_groups():
    checked = 0
    for order in range(2, 201):
        for torsion in _chains(order):
            g = abelian_table(list(torsion))
            for n in range(1, len(torsion) + 2):
                if order**n > 10**6:
                    break
                got = components(GraphQuery(g, n)).component_count
                want = predicted_components(AbelianGroup(torsion, 0).form, n)
                assert got == (0 if want == "empty" else want), (torsion, n)
                checked += 1
    assert checked > 400


def _corpus():
    from acnielsen.groups.library import standard_corpus

    return standard_corpus()


@pytest.mark.parametrize("name", sorted(_corpus()))
def test_nielsen_components_refine_ac_components(name):
    g = _corpus()[name]
    n = 2 if g.order() <= 24 else 1
    nielsen = components(GraphQuery(g, n, "nielsen"))
    ac = components(GraphQuery(g, n, "ac"))
    for block in _partition(nielsen):
        ids = {ac.component_id(t) for t in block}
        assert len(ids) == 1 and None not in ids


@pytest.mark.parametrize("name", sorted(_corpus()))
def test_stabilization_keeps_connectivity(name):
    from acnielsen.structure import is_class_C, rank_and_weight

    g = _corpus()[name]
    if not is_class_C(g):
        pytest.skip("stabilization is stated for class C")
    w = max(rank_and_weight(g)[1], 1)
    for n in range(w, 4):
        if g.order() ** (n + 1) > 10**6:
            break
        if components(GraphQuery(g, n, "ac")).component_count == 1:
            assert components(GraphQuery(g, n + 1, "ac")).component_count == 1


def test_components_independent_of_workers():
    from acnielsen._accel import set_workers

    reports = []
    for w in (1, 2):
        set_workers(w)
        reports.append(components(GraphQuery(heisenberg_table(3), 2, "ac"), backend=BACKENDS[-1]).to_json())
    set_workers(None)
    for r in reports:
        r["metadata"].pop("logs", None)
    assert reports[0] == reports[1]
