"""Constructive certificates for Nielsen and AC equivalence.

* ``heisenberg_canonicalize``: generating 2k-tuples of H_k to the standard basis.
* ``ac_normalize_2gen_nilpotent``: generating pairs of a finite class-C group
  to a fixed basis (x, y), peeling commutator factors one Schreier generator
  at a time, with a BFS fallback per step.
* ``frattini_lift`` / ``stabilize_certificate``: move a tuple to
  (x_1, ..., x_d, 1, ..., 1) once a spare slot is available.
* Free nilpotent F_2(3) helpers and the Akbulut-Kirby pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abelian import _row_reduce_moves
from .explorer import GraphQuery, _abelianization_table, _table, _to_index, find_path
from .groups import FreeNilpotentGroup, Group, GroupError, HeisenbergGroup
from .moves import Certificate, CertificateError, Move, MoveSequence, ac_move, apply_move
from .structure import (
    express_in_generators,
    frattini,
    generates,
    is_class_C,
    normally_generates,
    quotient_table,
    rank_and_weight,
    schreier_commutator_generators,
)
from .words import Word, free_reduce


class NoCertificate(CertificateError):
    """The two tuples are provably not equivalent under the requested moves."""


class _Builder:
    def __init__(self, group: Group, t):
        self.g = group
        self.t = tuple(t)
        self.moves: list[Move] = []
        self.steps: list[dict] = []

    def run(self, moves, step: dict | None = None):
        for m in moves:
            self.t = apply_move(self.g, self.t, m)
            self.moves.append(m)
        if step is not None:
            self.steps.append({**step, "moves": len(moves)})

    def try_run(self, moves) -> tuple:
        t = self.t
        for m in moves:
            t = apply_move(self.g, t, m)
        return t

    def certificate(self, source, kind: str, **meta) -> Certificate:
        return Certificate(self.g, source, self.t, MoveSequence(len(self.t), tuple(self.moves)), kind, {"steps": self.steps, **meta})


def _macro(b: _Builder, moves, expected: tuple, step: dict, query: GraphQuery):
    """Run a recipe step if it lands on ``expected``; otherwise patch it with a BFS path."""
    if b.try_run(moves) == expected:
        b.run(moves, {**step, "origin": "recipe"})
        return
    _bfs_step(b, expected, step, query)


def _bfs_step(b: _Builder, expected: tuple, step: dict, query: GraphQuery):
    cert = find_path(query, b.t, expected)
    if cert is None:
        raise CertificateError(f"step {step} failed and no path reaches its expected tuple")
    b.run(list(cert.moves), {**step, "origin": "bfs-fallback"})


def _r_moves_for_word(slot: int, w: Word, positions) -> list[Move]:
    # t_slot <- t_slot * w(t_positions)
    return [Move.R(slot, positions[gen - 1], sign) for gen, sign in w.letters]


# Heisenberg groups


def _clearing_moves(k: int, i: int, z: int) -> list[Move]:
    """Moves adding -z to the central coordinate of entry i (1-based) of a standard-form tuple."""
    if i <= k:
        partner = k + i
        up = [Move.R(i, partner, 1), Move.L(i, partner, -1)]
    else:
        partner = i - k
        up = [Move.R(i, partner, -1), Move.L(i, partner, 1)]
    down = [m.inverse() for m in reversed(up)]
    return (down if z > 0 else up) * abs(z)


def heisenberg_canonicalize(g: HeisenbergGroup, t) -> Certificate:
    """Nielsen certificate from a generating 2k-tuple of H_k to (e_1, ..., e_2k).

    Integer row reduction of the projected tuple is replayed upstairs,
    leaving (e_i with central coordinate m_i); each m_i is then cleared by
    repeating the inverse of the commutator sequence that adds 1.
    """
    if not isinstance(g, HeisenbergGroup):
        raise GroupError("heisenberg_canonicalize needs a Heisenberg group")
    t = g.check_tuple(t)
    k = g.k
    if len(t) != 2 * k:
        raise GroupError(f"expected a {2 * k}-tuple, got {len(t)} entries")
    if not generates(g, t):
        raise GroupError("tuple does not generate the group")
    b = _Builder(g, t)
    form = g.abelian_form
    moves, _, residue = _row_reduce_moves([g.project(a) for a in t], form.moduli)
    if residue != 1:
        raise NoCertificate(f"the abelianized tuple has determinant class {residue}, not that of the standard basis")
    b.run(moves, {"phase": "abelian-reduction", "origin": "recipe"})
    for i in range(1, 2 * k + 1):
        z = b.t[i - 1][-1]
        if g.modulus and 2 * z > g.modulus:
            z -= g.modulus
        if z:
            b.run(_clearing_moves(k, i, z), {"phase": "clear-center", "entry": i, "z": z, "origin": "recipe"})
    standard = tuple(g.generators())
    if b.t != standard:
        raise AssertionError("clearing did not reach the standard tuple")
    return b.certificate(t, "nielsen", recipe="heisenberg")


# AC normalization for 2-generated class-C groups


@lru_cache(maxsize=256)
def _recipe_generators(g: Group, x, y) -> tuple:
    """Schreier recipe elements for (x, y) with their (n1, n2); symmetric range if the default falls short."""
    for symmetric in (False, True):
        ss = schreier_commutator_generators(g, x, y, symmetric=symmetric)
        recipe = tuple((s, p["n1"], p["n2"]) for s, p in ss.generators if p["origin"] == "recipe")
        if not ss.augmented:
            return recipe
    return recipe


def _factor(g: Group, gens: tuple, phi) -> list | None:
    if phi == g.identity():
        return []
    if not gens:
        return None
    elems = tuple(s for s, _, _ in gens)
    try:
        w = express_in_generators(g, elems, phi)
    except GroupError:
        return None
    return [gens[gen - 1] for gen, _ in w.letters]


def _eliminate_second(b: _Builder, xh, y, query: GraphQuery):
    """(xh, y phi) -> (xh, y), one Schreier factor at a time."""
    g = b.g
    phi = g.mul(g.inv(y), b.t[1])
    factors = _factor(g, _recipe_generators(g, xh, y), phi)
    if factors is None:
        _bfs_step(b, (xh, y), {"phase": "eliminate-phi2"}, query)
        return
    rest = phi
    for s, n1, n2 in factors:
        rest = g.mul(g.inv(s), rest)
        c = g.mul(g.mul(y, g.pow(xh, n1)), g.pow(y, n2))  # y xh^n1 y^n2
        moves = [
            Move.I(1), ac_move(g, 1, g.inv(c), 1),
            Move.L(2, 1, 1), ac_move(g, 1, c, 1), Move.I(1),
            ac_move(g, 1, g.inv(y), 1),
            Move.L(2, 1, 1), ac_move(g, 1, y, 1),
        ]
        _macro(b, moves, (xh, g.mul(y, rest)), {"phase": "eliminate-phi2", "n1": n1, "n2": n2}, query)


def _eliminate_first(b: _Builder, x, y, query: GraphQuery):
    """(x phi, y) -> (x, y), one Schreier factor at a time."""
    g = b.g
    phi = g.mul(g.inv(x), b.t[0])
    factors = _factor(g, _recipe_generators(g, x, y), phi)
    if factors is None:
        _bfs_step(b, (x, y), {"phase": "eliminate-phi1"}, query)
        return
    rest = phi
    for s, n1, n2 in factors:
        rest = g.mul(g.inv(s), rest)
        sign = 1 if n2 >= 0 else -1
        moves = (
            [Move.I(2), ac_move(g, 2, g.pow(x, -(n1 + 1)), 1)]
            + [Move.L(1, 2, sign)] * abs(n2)
            + [ac_move(g, 2, g.pow(x, n1 + 1), 1), Move.I(2)]
            + [ac_move(g, 2, g.pow(x, -(n1 + 2)), 1)]
            + [Move.L(1, 2, sign)] * abs(n2)
            + [ac_move(g, 2, g.pow(x, n1 + 2), 1)]
        )
        _macro(b, moves, (g.mul(x, rest), y), {"phase": "eliminate-phi1", "n1": n1, "n2": n2}, query)


def _abelian_path(g: Group, source, target, n: int):
    """Nielsen moves in Ab(G) between the images of two tuples, or None."""
    tg = _table(g)
    ab, abt, image = _abelianization_table(tg)
    s = tuple(int(image[_to_index(g, tg, a)]) for a in source)
    d = tuple(int(image[_to_index(g, tg, a)]) for a in target)
    cert = find_path(GraphQuery(abt, n, "nielsen"), s, d)
    return None if cert is None else list(cert.moves)


def ac_normalize_2gen_nilpotent(g: Group, t, basis) -> Certificate:
    """AC certificate from a generating pair ``t`` to ``basis`` = (x, y) in a finite class-C group.

    Raises ``NoCertificate`` when the images in Ab(G) are not equivalent,
    in which case no AC path exists.
    """
    if not g.is_finite():
        raise GroupError("ac_normalize_2gen_nilpotent needs a finite group")
    t = g.check_tuple(t)
    x, y = g.check_tuple(basis)
    if len(t) != 2:
        raise GroupError("expected a pair")
    if not is_class_C(g):
        raise GroupError("group is not in class C (some maximal subgroup is not normal)")
    if rank_and_weight(g)[0] != 2:
        raise GroupError("group does not have rank 2")
    if not generates(g, (x, y)):
        raise GroupError("basis does not generate the group")
    if not generates(g, t):
        raise GroupError("tuple does not generate the group")
    b = _Builder(g, t)
    if t == (x, y):
        return b.certificate(t, "ac", recipe="ac-2gen")
    ab_moves = _abelian_path(g, t, (x, y), 2)
    if ab_moves is None:
        raise NoCertificate("images in the abelianization are not AC equivalent")
    b.run(ab_moves, {"phase": "abelian-path", "origin": "bfs-abelianization"})
    query = GraphQuery(g, 2, "ac")
    xh = b.t[0]
    _eliminate_second(b, xh, y, query)
    _eliminate_first(b, x, y, query)
    if b.t != (x, y):
        raise AssertionError("normalization did not reach the basis")
    return b.certificate(t, "ac", recipe="ac-2gen")


# spare-slot clearing (Frattini lift, stabilization)


def _clear_spare(b: _Builder, basis: tuple, origin: str):
    """(x_1 c_1, ..., x_d c_d, c_{d+1}, ..., c_n) -> (x_1, ..., x_d, 1, ..., 1), n > d.

    Needs the first d entries to generate throughout, which holds whenever
    every c_i lies in the Frattini subgroup.
    """
    g = b.g
    d, n = len(basis), len(b.t)
    e = g.identity()
    head = tuple(range(1, d + 1))
    for j in range(d + 1, n + 1):
        if b.t[j - 1] != e:
            w = express_in_generators(g, b.t[:d], g.inv(b.t[j - 1]), inverses=True)
            b.run(_r_moves_for_word(j, w, head), {"phase": "clear-slot", "slot": j, "origin": origin})
    spare = d + 1
    for i in range(1, d + 1):
        if b.t[i - 1] == basis[i - 1]:
            continue
        phi = g.mul(g.inv(basis[i - 1]), b.t[i - 1])
        w = express_in_generators(g, b.t[:d], phi, inverses=True)
        moves = _r_moves_for_word(spare, w, head) + [Move.R(i, spare, -1)]
        b.run(moves, {"phase": "fix-entry", "entry": i, "origin": origin})
        w = express_in_generators(g, b.t[:d], g.inv(b.t[spare - 1]), inverses=True)
        b.run(_r_moves_for_word(spare, w, head), {"phase": "clear-slot", "slot": spare, "origin": origin})


def _default_basis(g: Group, d: int) -> tuple:
    gens = tuple(g.generators())
    if len(gens) == d and generates(g, gens):
        return gens
    from itertools import combinations

    tg = _table(g)
    for combo in combinations(range(tg.n), d):
        if tg.closure(combo).all():
            return tuple(tg.lift[c] if tg is not g else c for c in combo)
    raise GroupError("no generating tuple of rank size found")


@lru_cache(maxsize=32)
def _frattini_quotient(g: Group):
    return quotient_table(g, frattini(g))


def frattini_lift(g: Group, n: int, t, basis=None) -> Certificate:
    """Nielsen certificate from ``t`` to (x_1, ..., x_d, 1, ..., 1), d = rank(G) < n.

    A path in the graph of G/Phi(G) is replayed upstairs; what is left are
    Frattini factors, cleared through the spare slot.
    """
    if not g.is_finite():
        raise GroupError("frattini_lift needs a finite group")
    t = g.check_tuple(t)
    if len(t) != n:
        raise GroupError(f"expected a {n}-tuple, got {len(t)} entries")
    d = rank_and_weight(g)[0]
    if n < d + 1:
        raise GroupError(f"frattini_lift needs n >= rank + 1 = {d + 1}")
    if not generates(g, t):
        raise GroupError("tuple does not generate the group")
    basis = _default_basis(g, d) if basis is None else g.check_tuple(basis)
    if len(basis) != d or not generates(g, basis):
        raise GroupError(f"basis must be a generating {d}-tuple")
    target = tuple(basis) + (g.identity(),) * (n - d)
    b = _Builder(g, t)
    if t == target:
        return b.certificate(t, "nielsen", recipe="frattini-lift")
    q, image = _frattini_quotient(g)
    qcert = find_path(GraphQuery(q, n, "nielsen"), tuple(image[a] for a in t), tuple(image[a] for a in target))
    if qcert is None:
        raise NoCertificate("the tuples are in different components of the Frattini quotient graph")
    b.run(list(qcert.moves), {"phase": "quotient-path", "origin": "bfs-quotient"})
    _clear_spare(b, tuple(basis), "recipe")
    return b.certificate(t, "nielsen", recipe="frattini-lift")


def stabilize_certificate(g: Group, cert: Certificate, extended_source) -> Certificate:
    """AC certificate in the (n+1)-tuple graph from ``extended_source`` to (x_1, ..., x_n, 1).

    (x_1, ..., x_n) is ``cert.target``. When the first n entries of the
    source equal ``cert.source`` the certificate is replayed on them and the
    last slot cleared; otherwise the tuple is first normalized in Ab(G).
    """
    if not g.is_finite():
        raise GroupError("stabilize_certificate needs a finite group")
    if not is_class_C(g):
        raise GroupError("stabilization needs a class-C group")
    src = g.check_tuple(extended_source)
    n = len(cert.source)
    if len(src) != n + 1:
        raise GroupError(f"expected an extended source of length {n + 1}")
    if not normally_generates(g, src):
        raise GroupError("extended source does not normally generate the group")
    target = tuple(cert.target) + (g.identity(),)
    b = _Builder(g, src)
    if src == target:
        return b.certificate(src, "ac", recipe="stabilize")
    if src[:n] == tuple(cert.source):
        b.run(list(cert.moves), {"phase": "lifted-certificate", "origin": "certificate"})
    else:
        ab_moves = _abelian_path(g, src, target, n + 1)
        if ab_moves is None:
            raise NoCertificate("images in the abelianization are not equivalent")
        b.run(ab_moves, {"phase": "abelian-path", "origin": "bfs-abelianization"})
    _clear_spare(b, tuple(cert.target), "recipe")
    return b.certificate(src, "ac", recipe="stabilize")


# free nilpotent group F_2(3)


@dataclass(frozen=True)
class CentralAutParams:
    """x -> x [y,x,x]^l1 [y,x,y]^l2,  y -> y [y,x,x]^m1 [y,x,y]^m2."""

    lambda1: int = 0
    lambda2: int = 0
    mu1: int = 0
    mu2: int = 0


def is_tame_central(p: CentralAutParams) -> bool:
    """The stated tameness condition: lambda1 = mu2 and lambda2 = mu1 = 0.

    Only the sufficient direction is established for this family; a False
    result means the condition fails, not a proof of non-tameness.
    """
    return p.lambda1 == p.mu2 and p.lambda2 == 0 and p.mu1 == 0


def apply_endomorphism(f: FreeNilpotentGroup, ximg, yimg, v):
    """Image of the Mal'cev vector ``v`` under x -> ximg, y -> yimg."""
    c = f.commutator(yimg, ximg)
    images = (ximg, yimg, c, f.commutator(c, ximg), f.commutator(c, yimg))
    out = f.identity()
    for img, k in zip(images, v):
        if k:
            out = f.mul(out, f.pow(img, k))
    return out


def central_automorphism(f: FreeNilpotentGroup, p: CentralAutParams):
    """Images of x and y under the central automorphism with parameters ``p``."""
    x, y = f.generators()
    d, h = f.basis_element("[y,x,x]"), f.basis_element("[y,x,y]")
    ximg = f.mul(f.mul(x, f.pow(d, p.lambda1)), f.pow(h, p.lambda2))
    yimg = f.mul(f.mul(y, f.pow(d, p.mu1)), f.pow(h, p.mu2))
    return ximg, yimg


def andreadakis_power(k: int):
    """alpha^k(x) in F_2(3) for alpha: x -> x[y,x,x], y -> y, by iterating alpha."""
    if k < 0:
        raise ValueError("k must be non-negative")
    f = FreeNilpotentGroup(2, 3)
    ximg, yimg = central_automorphism(f, CentralAutParams(1, 0, 0, 0))
    v = f.generators()[0]
    for _ in range(k):
        v = apply_endomorphism(f, ximg, yimg, v)
    return v


def akbulut_kirby(l: int) -> tuple[Word, Word]:
    """(u, v_l) = (x1 x2 x1 x2^-1 x1^-1 x2^-1, x1^l x2^-(l+1)) as reduced words."""
    if l < 1:
        raise ValueError("l must be >= 1")
    u = Word(2, ((1, 1), (2, 1), (1, 1), (2, -1), (1, -1), (2, -1)))
    v = Word.generator(2, 1, l) * Word.generator(2, 2, -(l + 1))
    return free_reduce(u), free_reduce(v)


__all__ = [
    "CentralAutParams",
    "NoCertificate",
    "ac_normalize_2gen_nilpotent",
    "akbulut_kirby",
    "andreadakis_power",
    "apply_endomorphism",
    "central_automorphism",
    "frattini_lift",
    "heisenberg_canonicalize",
    "is_tame_central",
    "stabilize_certificate",
]
