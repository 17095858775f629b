"""Small finite groups as Cayley tables, used as the test and demo corpus."""
from __future__ import annotations

from collections import deque
from itertools import product
from typing import Callable, Hashable, Sequence

from .abelian import AbelianGroup
from .heisenberg import HeisenbergGroup
from .table import TableGroup, table_from_backend


def from_generators(
    gens: Sequence[Hashable],
    mul: Callable,
    identity: Hashable,
    label: Callable[[Hashable], str] = str,
    name: str | None = None,
) -> TableGroup:
    """Close ``gens`` under ``mul`` and tabulate; BFS order fixes element indices."""
    elems = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return TableGroup([label(x) for x in elems], table, generators=[index[g] for g in gens], name=name)


def _perm_mul(p, q):
    # apply p, then q
    return tuple(q[i] for i in p)


def _cycles(p) -> str:
    seen, parts = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


def permutation_group(gens: Sequence[Sequence[int]], name: str | None = None) -> TableGroup:
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    return from_generators(gens, _perm_mul, tuple(range(n)), _cycles, name)


def cyclic(m: int) -> TableGroup:
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    return TableGroup([str(a) for a in range(m)], table, generators=[1 % m] if m > 1 else [], name=f"Z{m}")


def dihedral(n: int) -> TableGroup:
    """Dihedral group of order 2n (symmetries of the n-gon)."""
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    return permutation_group([r, s], name=f"D{n}")


def symmetric(n: int) -> TableGroup:
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return permutation_group(gens, name=f"S{n}")


def alternating(n: int) -> TableGroup:
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return permutation_group(gens, name=f"A{n}")


_Q8_LABELS = {
    (1, 0): "1", (-1, 0): "-1", (1, 1): "i", (-1, 1): "-i",
    (1, 2): "j", (-1, 2): "-j", (1, 3): "k", (-1, 3): "-k",
}
# unit quaternion products on the basis 1, i, j, k: (sign, index)
_QMUL = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def quaternion() -> TableGroup:
    elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    index = {x: i for i, x in enumerate(elems)}

    def mul(a, b):
        s, c = _QMUL[a[1]][b[1]]
        return (a[0] * b[0] * s, c)

    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return TableGroup([_Q8_LABELS[x] for x in elems], table, generators=["i", "j"], name="Q8")


def abelian_table(torsion: Sequence[int]) -> TableGroup:
    return AbelianGroup(tuple(torsion), 0).as_table()


def heisenberg_table(modulus: int, k: int = 1) -> TableGroup:
    return HeisenbergGroup(k, modulus).as_table()


def direct_product(g: TableGroup, h: TableGroup, name: str | None = None) -> TableGroup:
    pairs = list(product(range(g.n), range(h.n)))
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(g.rows[a][c], h.rows[b][d])] for c, d in pairs] for a, b in pairs]
    labels = [f"({g.labels[a]},{h.labels[b]})" for a, b in pairs]
    gens = [index[(x, h.e)] for x in g.gens] + [index[(g.e, y)] for y in h.gens]
    return TableGroup(labels, table, generators=gens, name=name or f"{g.name}x{h.name}")


def standard_corpus() -> dict[str, TableGroup]:
    """Named finite groups exercised by the class-C / nilpotency checks."""
    return {
        "Z2": cyclic(2),
        "Z6": cyclic(6),
        "Z8": cyclic(8),
        "Z2xZ2": abelian_table([2, 2]),
        "Z2xZ4": abelian_table([2, 4]),
        "Z3xZ3": abelian_table([3, 3]),
        "S3": symmetric(3),
        "D4": dihedral(4),
        "D5": dihedral(5),
        "D6": dihedral(6),
        "Q8": quaternion(),
        "A4": alternating(4),
        "S4": symmetric(4),
        "Q8xZ3": direct_product(quaternion(), cyclic(3)),
        "Heis2": heisenberg_table(2),
        "Heis3": heisenberg_table(3),
    }


__all__ = [
    "abelian_table",
    "alternating",
    "cyclic",
    "dihedral",
    "direct_product",
    "from_generators",
    "heisenberg_table",
    "permutation_group",
    "quaternion",
    "standard_corpus",
    "symmetric",
]
