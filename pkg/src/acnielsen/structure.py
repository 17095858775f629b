"""Structural predicates and subgroups of finite (and a few infinite) groups.

Finite backends are handled through their Cayley table; subgroups are
explicit element sets, stored internally as Python-int bitmasks.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .groups import AbelianForm, FreeNilpotentGroup, Group, GroupError, HeisenbergGroup, TableGroup
from .groups.abelian import AbelianGroup
from .snf import invariant_factors
from .words import Word, evaluate_word


def _table(g: Group) -> TableGroup:
    if not g.is_finite():
        raise GroupError(f"{g.kind} group is infinite; this operation needs a finite group")
    return g.as_table()


def _to_index(g: Group, tg: TableGroup, a) -> int:
    return int(a) if tg is g else tg.embed[a]


def _from_index(g: Group, tg: TableGroup, i: int):
    return int(i) if tg is g else tg.lift[i]


def _mask_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(np.uint8), bitorder="little").tobytes(), "little")


def _int_members(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True)
class Subgroup:
    group: Group
    elements: frozenset
    is_normal: bool = False
    _bits: int = field(default=0, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return a in self.elements

    def __len__(self):
        return len(self.elements)

    def labels(self) -> list[str]:
        g = self.group
        return sorted(g.format_element(a) for a in self.elements)


def _subgroup(g: Group, tg: TableGroup, bits: int, normal: bool | None = None) -> Subgroup:
    members = _int_members(bits)
    if normal is None:
        normal = _is_normal_bits(tg, bits)
    return Subgroup(g, frozenset(_from_index(g, tg, i) for i in members), normal, bits)


def _closure_bits(tg: TableGroup, gens) -> int:
    return _mask_int(tg.closure(gens))


def _is_normal_bits(tg: TableGroup, bits: int) -> bool:
    members = _int_members(bits)
    for s in tg.generating_set:
        si = int(tg.inverse[s])
        for h in members:
            if not bits >> tg.rows[tg.rows[si][h]][s] & 1:
                return False
    return True


# generation


def _abelian_generates(form: AbelianForm, vectors) -> bool:
    """``vectors`` generate ``form`` iff the Smith form of tuple rows plus relation rows is all ones."""
    dim = form.rank
    if dim == 0:
        return True
    rows = [list(map(int, v)) for v in vectors]
    for i, m in enumerate(form.moduli):
        if m:
            rows.append([m if j == i else 0 for j in range(dim)])
    if len(rows) < dim:
        return False
    factors = invariant_factors(rows)
    return len(factors) == dim and all(abs(d) == 1 for d in factors)


def generates(g: Group, t) -> bool:
    """True iff the entries of ``t`` generate ``g``."""
    t = tuple(t)
    if isinstance(g, TableGroup):
        return bool(g.closure(t).all())
    if isinstance(g, AbelianGroup):
        return _abelian_generates(g.form, t)
    if isinstance(g, (HeisenbergGroup, FreeNilpotentGroup)):
        # nilpotent: [G,G] lies in the Frattini subgroup, so generation is decided in Ab(G)
        form, proj = g.abelianization()
        return _abelian_generates(form, [proj(a) for a in t])
    tg = _table(g)
    return bool(tg.closure(_to_index(g, tg, a) for a in t).all())


def normally_generates(g: Group, t) -> bool:
    """True iff the normal closure of the entries of ``t`` is ``g``."""
    t = tuple(t)
    if g.is_finite():
        tg = _table(g)
        return bool(tg.normal_closure(_to_index(g, tg, a) for a in t).all())
    if g.known_class_c:
        return generates(g, t)
    raise GroupError(f"normal generation is undecidable here for the infinite {g.kind} group")


# subgroup lattice


def _proper_subgroups(tg: TableGroup) -> dict[int, tuple[int, ...]]:
    """All proper subgroups as ``bits -> generating elements``, by cyclic extension."""
    full = (1 << tg.n) - 1
    cyclic: dict[int, int] = {}
    for a in range(tg.n):
        bits = _closure_bits(tg, [a])
        if bits not in cyclic:
            cyclic[bits] = a
    found = {bits: (a,) for bits, a in cyclic.items() if bits != full}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            gens = found[h]
            for cbits, a in cyclic.items():
                if cbits & ~h == 0:
                    continue
                k = _closure_bits(tg, gens + (a,))
                if k != full and k not in found:
                    found[k] = gens + (a,)
                    nxt.append(k)
        frontier = nxt
    return found


@lru_cache(maxsize=64)
def _maximal_bits(tg: TableGroup) -> tuple[int, ...]:
    subs = sorted(_proper_subgroups(tg), key=lambda b: (-bin(b).count("1"), b))
    maximal: list[int] = []
    for h in subs:
        if not any(h & ~m == 0 for m in maximal):
            maximal.append(h)
    return tuple(sorted(maximal))


def maximal_subgroups(g: Group) -> list[Subgroup]:
    """All maximal proper subgroups, each flagged normal or not."""
    tg = _table(g)
    return [_subgroup(g, tg, b) for b in _maximal_bits(tg)]


def _frattini_bits(tg: TableGroup) -> int:
    bits = (1 << tg.n) - 1
    for m in _maximal_bits(tg):
        bits &= m
    return bits


def frattini(g: Group) -> Subgroup:
    """Intersection of all maximal subgroups (the whole group if there are none)."""
    tg = _table(g)
    return _subgroup(g, tg, _frattini_bits(tg), normal=True)


def derived_subgroup(g: Group) -> Subgroup:
    tg = _table(g)
    return _subgroup(g, tg, _mask_int(tg.derived_mask), normal=True)


def frattini_quotient_order(g: Group) -> int:
    tg = _table(g)
    return tg.n // bin(_frattini_bits(tg)).count("1")


def quotient_table(g: Group, normal: Subgroup) -> tuple[TableGroup, dict]:
    """G/N as a table; returns it with the map from elements of ``g`` to quotient indices."""
    tg = _table(g)
    nmem = [_to_index(g, tg, a) for a in sorted(normal.elements, key=lambda a: _to_index(g, tg, a))]
    coset = np.full(tg.n, -1, dtype=np.int64)
    reps = []
    for a in range(tg.n):
        if coset[a] < 0:
            coset[[tg.rows[a][h] for h in nmem]] = len(reps)
            reps.append(a)
    table = [[int(coset[tg.rows[a][b]]) for b in reps] for a in reps]
    labels = [f"{tg.labels[a]}N" for a in reps]
    gens = sorted({int(coset[s]) for s in tg.generating_set})
    q = TableGroup(labels, table, generators=gens, name=f"{tg.name}/N", validate=False)
    image = {_from_index(g, tg, a): int(coset[a]) for a in range(tg.n)}
    return q, image


def lower_central_series(g: Group) -> list[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], until it stabilises."""
    tg = _table(g)
    gens = tg.generating_set
    current = np.ones(tg.n, dtype=bool)
    series = [current]
    while True:
        members = np.flatnonzero(current)
        comms = {tg.commutator(int(a), s) for a in members for s in gens}
        nxt = tg.normal_closure(comms)
        if (nxt == current).all():
            break
        series.append(nxt)
        current = nxt
    return [_subgroup(g, tg, _mask_int(m), normal=True) for m in series]


def is_nilpotent(g: Group) -> bool:
    return lower_central_series(g)[-1].order == 1


def is_class_C(g: Group) -> bool:
    """True iff every maximal subgroup is normal."""
    tg = _table(g)
    return all(_is_normal_bits(tg, b) for b in _maximal_bits(tg))


def _frattini_transversal(tg: TableGroup) -> list[int]:
    """One element per non-trivial coset of the Frattini subgroup, smallest index first."""
    phi = _int_members(_frattini_bits(tg))
    seen = np.zeros(tg.n, dtype=bool)
    seen[phi] = True
    reps = []
    for a in range(tg.n):
        if not seen[a]:
            reps.append(a)
            seen[[tg.rows[a][f] for f in phi]] = True
    return reps


@lru_cache(maxsize=64)
def _rank_weight(tg: TableGroup) -> tuple[int, int]:
    if tg.n == 1:
        return 0, 0
    # generation and normal generation only see cosets of the Frattini subgroup
    reps = _frattini_transversal(tg)
    rank = weight = None
    n = 1
    while rank is None:
        for t in combinations_with_replacement(reps, n):
            if weight is None and tg.normal_closure(t).all():
                weight = n
            if tg.closure(t).all():
                rank = n
                break
        n += 1
    return rank, weight if weight is not None else rank


def rank_and_weight(g: Group) -> tuple[int, int]:
    """Minimal sizes of a generating and of a normally generating tuple."""
    return _rank_weight(_table(g))


# Schreier generators of the derived subgroup


@dataclass
class SchreierSet:
    x: object
    y: object
    generators: list = field(default_factory=list)  # (element, {"n1", "n2", "l", "origin"})
    augmented: bool = False

    def elements(self) -> list:
        return [s for s, _ in self.generators]


def schreier_commutator_generators(g: Group, x, y, symmetric: bool = False) -> SchreierSet:
    """Elements x^n1 y^n2 x (x^(n1+1) y^n2)^-1 generating [G,G] for a generating pair (x, y).

    By default n1, n2 range over [0, ord) of the images of x, y in the
    abelianization; ``symmetric`` uses (-ord_G, ord_G) instead. If the
    recipe set falls short of [G,G] it is completed with the Schreier
    generators of a genuine transversal and ``augmented`` is set.
    """
    tg = _table(g)
    xi, yi = _to_index(g, tg, x), _to_index(g, tg, y)
    if not tg.closure([xi, yi]).all():
        raise GroupError("the base pair does not generate the group")
    _, proj = tg.abelianization()
    if symmetric:
        ox, oy = tg.element_order(xi), tg.element_order(yi)
        r1, r2 = range(-ox + 1, ox), range(-oy + 1, oy)
    else:
        r1 = range(_ab_order(tg, proj, xi))
        r2 = range(_ab_order(tg, proj, yi))
    out = SchreierSet(x, y)
    seen: set[int] = set()
    for n1 in r1:
        for n2 in r2:
            left = tg.mul(tg.mul(tg.pow(xi, n1), tg.pow(yi, n2)), xi)
            right = tg.mul(tg.pow(xi, n1 + 1), tg.pow(yi, n2))
            s = tg.mul(left, tg.inv(right))
            if s != tg.e and s not in seen:
                seen.add(s)
                out.generators.append((_from_index(g, tg, s), {"n1": n1, "n2": n2, "l": 1, "origin": "recipe"}))
    derived = tg.derived_mask
    if not (tg.closure(seen) == derived).all():
        for s, prov in _transversal_schreier(tg, xi, yi, proj):
            if s != tg.e and s not in seen:
                seen.add(s)
                out.generators.append((_from_index(g, tg, s), prov))
        out.augmented = True
    assert (tg.closure(seen) == derived).all()
    return out


def _ab_order(tg: TableGroup, proj, a: int) -> int:
    k, b = 1, a
    while any(proj(b)):
        b = tg.mul(b, a)
        k += 1
    return k


def _transversal_schreier(tg: TableGroup, xi: int, yi: int, proj):
    # transversal of G/[G,G] by words x^a y^b (first hit in lexicographic order)
    ax, ay = _ab_order(tg, proj, xi), _ab_order(tg, proj, yi)
    rep = {}
    for a in range(ax):
        for b in range(ay):
            c = tg.mul(tg.pow(xi, a), tg.pow(yi, b))
            rep.setdefault(proj(c), (c, a, b))
    for key, (c, a, b) in sorted(rep.items()):
        for name, gen in (("x", xi), ("y", yi)):
            cg = tg.mul(c, gen)
            d = rep[proj(cg)][0]
            yield tg.mul(cg, tg.inv(d)), {"n1": a, "n2": b, "l": 1, "origin": f"schreier-{name}"}


# words for elements


@lru_cache(maxsize=256)
def _cayley_tree(g: Group, t: tuple, inverses: bool) -> dict:
    """BFS tree from the identity; ``tree[a] = (parent, letter)``."""
    steps = [((i + 1, 1), a) for i, a in enumerate(t)]
    if inverses:
        steps += [((i + 1, -1), g.inv(a)) for i, a in enumerate(t)]
    e = g.identity()
    tree = {e: None}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        for letter, s in steps:
            b = g.mul(a, s)
            if b not in tree:
                tree[b] = (a, letter)
                queue.append(b)
    return tree


def express_in_generators(g: Group, t, target, inverses: bool = False) -> Word:
    """Shortest word w over t's alphabet with w(t) = target.

    Breadth-first search in the Cayley graph of the entries of ``t`` (and
    their inverses when ``inverses`` is set); ties go to the first
    generator in tuple order.
    """
    if not g.is_finite():
        raise GroupError("express_in_generators needs a finite group")
    t = tuple(t)
    if not t:
        raise GroupError("empty tuple")
    tree = _cayley_tree(g, t, inverses)
    if target not in tree:
        raise GroupError(f"{g.format_element(target)} is not in the subgroup generated by the tuple")
    letters = []
    node = target
    while tree[node] is not None:
        node, letter = tree[node]
        letters.append(letter)
    w = Word(len(t), tuple(reversed(letters)))
    if evaluate_word(w, g, t) != target:
        raise AssertionError("word search returned a wrong word")
    return w


def word_for_element(g: Group, element) -> Word | None:
    """A shortest positive word over the distinguished generators, or None if they do not generate."""
    gens = tuple(g.generators())
    if not gens or not g.is_finite():
        return None
    tree = _cayley_tree(g, gens, False)
    if element not in tree:
        return None
    return express_in_generators(g, gens, element)


__all__ = [
    "SchreierSet",
    "Subgroup",
    "derived_subgroup",
    "express_in_generators",
    "frattini",
    "frattini_quotient_order",
    "generates",
    "quotient_table",
    "is_class_C",
    "is_nilpotent",
    "lower_central_series",
    "maximal_subgroups",
    "normally_generates",
    "rank_and_weight",
    "schreier_commutator_generators",
    "word_for_element",
]
