"""Nielsen classification of generating tuples in finitely generated abelian groups.

For G = Z_m1 x ... x Z_mr x Z^s (m1 | ... | mr) the graph of generating
n-tuples is connected when n > r + s, when r = 0 and n = s, and when
n = r + s with m1 = 2; otherwise (n = r + s, m1 >= 3) it has phi(m1)/2
components, told apart by the determinant of the exponent matrix mod m1
up to sign.
"""
from __future__ import annotations

from math import gcd

from .groups import AbelianForm, AbelianGroup, GroupError
from .moves import Certificate, Move, MoveSequence, nielsen_swap
from .snf import det, invariant_factors, smith_normal_form

__all__ = [
    "AbelianForm",
    "abelian_reduce",
    "canonical_tuple",
    "euler_phi",
    "invariant_factors",
    "nielsen_det_invariant",
    "predicted_components",
    "smith_normal_form",
]


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("euler_phi needs m >= 1")
    result, k, rest = m, 2, m
    while k * k <= rest:
        if rest % k == 0:
            while rest % k == 0:
                rest //= k
            result -= result // k
        k += 1
    if rest > 1:
        result -= result // rest
    return result


def _form(a) -> AbelianForm:
    if isinstance(a, AbelianGroup):
        return a.form
    if isinstance(a, AbelianForm):
        return a
    raise TypeError(f"expected an AbelianForm or AbelianGroup, got {type(a).__name__}")


def predicted_components(a, n: int):
    """Number of components of the generating n-tuple graph, or ``"empty"``."""
    a = _form(a)
    r, s = len(a.torsion), a.free_rank
    if n < r + s:
        return "empty"
    if n >= r + s + 1:
        return 1
    if r == 0:
        return 1
    m1 = a.torsion[0]
    if m1 == 2:
        return 1
    return euler_phi(m1) // 2


def _generates(a: AbelianForm, t) -> bool:
    dim = a.rank
    if dim == 0:
        return True
    rows = [list(map(int, v)) for v in t]
    rows += [[m if j == i else 0 for j in range(dim)] for i, m in enumerate(a.moduli) if m]
    if len(rows) < dim:
        return False
    f = invariant_factors(rows)
    return len(f) == dim and all(d == 1 for d in f)


def nielsen_det_invariant(a, t) -> tuple[int, int]:
    """The unordered pair {u, m1 - u} with u = det(exponent matrix) mod m1."""
    a = _form(a)
    t = [tuple(int(x) for x in v) for v in t]
    if a.free_rank or not a.torsion:
        raise GroupError("the determinant invariant needs a finite group with torsion")
    if len(t) != a.rank:
        raise GroupError(f"the determinant invariant needs n = rank = {a.rank}, got n = {len(t)}")
    m1 = a.torsion[0]
    if m1 < 3:
        raise GroupError("the determinant invariant is trivial when m1 = 2")
    if not _generates(a, t):
        raise GroupError("tuple does not generate the group")
    u = det(t) % m1
    return tuple(sorted((u, (m1 - u) % m1)))


class _Reducer:
    """Row reduction of an exponent matrix where every row operation is a Nielsen move."""

    def __init__(self, rows, moduli):
        self.moduli = tuple(moduli)
        self.rows = [self._norm(r) for r in rows]
        self.moves: list[Move] = []

    def _norm(self, v):
        return [x % m if m else x for x, m in zip(v, self.moduli)]

    def _add(self, k, p, sign, times):
        # row_k <- row_k + sign * row_p, ``times`` times: R(k, p, sign)^times
        if times <= 0:
            return
        rk, rp = self.rows[k], self.rows[p]
        self.rows[k] = self._norm([x + sign * times * y for x, y in zip(rk, rp)])
        self.moves.extend([Move.R(k + 1, p + 1, sign)] * times)

    def _sub_multiple(self, k, p, q):
        # row_k <- row_k - q * row_p
        if q > 0:
            self._add(k, p, -1, q)
        elif q < 0:
            self._add(k, p, 1, -q)

    def _invert(self, k):
        self.rows[k] = self._norm([-x for x in self.rows[k]])
        self.moves.append(Move.I(k + 1))

    def _swap(self, i, j):
        if i == j:
            return
        self.rows[i], self.rows[j] = self.rows[j], self.rows[i]
        self.moves.extend(nielsen_swap(i + 1, j + 1))

    def pivot(self, c, col, active):
        """Euclid on the ``active`` rows in column ``col``; leaves the gcd in row c. Returns it."""
        mu = self.moduli[col]
        lift = {k: self.rows[k][col] for k in active}
        widened = False
        while True:
            nonzero = [k for k in active if lift[k]]
            if not nonzero:
                raise GroupError("tuple does not generate the group")
            p = min(nonzero, key=lambda k: (abs(lift[k]), k != c, k))
            if len(nonzero) == 1:
                g = lift[p]
                spare = [k for k in active if k != p]
                if mu and spare and not widened and g % mu != 1:
                    # a zero residue is also the integer mu; Euclid against it reaches gcd(g, mu)
                    lift[spare[0]] = mu
                    widened = True
                    continue
                break
            for k in nonzero:
                if k != p:
                    q = lift[k] // lift[p]
                    self._sub_multiple(k, p, q)
                    lift[k] -= q * lift[p]
        self._swap(c, p)
        g = self.rows[c][col]
        if mu == 0:
            if abs(g) != 1:
                raise GroupError("tuple does not generate the group")
            if g == -1:
                self._invert(c)
        else:
            if gcd(g, mu) != 1:
                raise GroupError("tuple does not generate the group")
            if 2 * g > mu:
                self._invert(c)
        return self.rows[c][col]

    def eliminate(self, c, col):
        mu = self.moduli[col]
        g = self.rows[c][col]
        ginv = pow(g, -1, mu) if mu else g
        for k in range(len(self.rows)):
            if k == c or not self.rows[k][col]:
                continue
            a = self.rows[k][col]
            if mu:
                q = a * ginv % mu
                if 2 * q > mu:
                    q -= mu
            else:
                q = a * ginv
            self._sub_multiple(k, c, q)


def _column_order(moduli) -> list[int]:
    # free columns, then torsion from the largest modulus down to m1; this keeps every pivot a unit
    free = [i for i, m in enumerate(moduli) if m == 0]
    tors = sorted((i for i, m in enumerate(moduli) if m), key=lambda i: (-moduli[i], -i))
    return free + tors


def _row_reduce_moves(matrix, moduli):
    """Nielsen moves taking the rows of ``matrix`` to unit vectors (in coordinate order).

    Returns ``(moves, final_rows, residue)``; ``residue`` is the unit left in
    the last pivot when there is no spare row (1 otherwise).
    """
    red = _Reducer(matrix, moduli)
    dim = len(moduli)
    if len(red.rows) < dim:
        raise GroupError(f"a {len(red.rows)}-tuple cannot generate a rank-{dim} group")
    residue = 1
    free_rows = list(range(len(red.rows)))
    # the pivot of column i is parked in row i, so no final permutation is needed
    for col in _column_order(moduli):
        residue = red.pivot(col, col, free_rows)
        free_rows.remove(col)
        red.eliminate(col, col)
    return red.moves, red.rows, residue


def canonical_tuple(a, n: int, residue: int = 1) -> tuple:
    """Basis vectors padded with identities; the first entry scaled by ``residue``."""
    a = _form(a)
    dim = a.rank
    out = []
    for i in range(n):
        v = [0] * dim
        if i < dim:
            v[i] = residue if i == 0 else 1
        out.append(tuple(x % m if m else x for x, m in zip(v, a.moduli)))
    return tuple(out)


def abelian_reduce(a, t) -> Certificate:
    """Nielsen certificate from a generating tuple to its canonical representative.

    The target is the padded basis, except when n = rank and m1 >= 3 where
    it is diag(u, 1, ..., 1) with u = +-det mod m1 normalised to u <= m1/2.
    """
    form = _form(a)
    group = a if isinstance(a, AbelianGroup) else AbelianGroup.from_form(form)
    src = group.check_tuple(tuple(group.element(v) for v in t))
    if not _generates(form, src):
        raise GroupError("tuple does not generate the group")
    n = len(src)
    if form.rank == 0:
        return Certificate(group, src, src, MoveSequence(n, ()), "nielsen", {"residue": 1})
    moves, rows, residue = _row_reduce_moves(src, form.moduli)
    target = canonical_tuple(form, n, residue)
    meta = {"residue": residue}
    if n == form.rank and not form.free_rank and form.torsion and form.torsion[0] >= 3:
        meta["det_invariant"] = list(nielsen_det_invariant(form, src))
    return Certificate(group, src, target, MoveSequence(n, tuple(moves)), "nielsen", meta)
