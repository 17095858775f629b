"""Finite groups given by a full multiplication table."""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .base import Group, GroupError

# associativity check works on row blocks holding at most this many triples
_ASSOC_TRIPLES = 1 << 22


class TableGroup(Group):
    """Group on elements ``0..N-1`` with ``table[a, b] = a*b``.

    ``labels`` name the elements for I/O; ``gens`` are the distinguished
    generators used when tuples are entered as words.
    """

    kind = "cayley_table"

    def __init__(
        self,
        labels: Sequence[str],
        table,
        generators: Sequence | None = None,
        name: str | None = None,
        validate: bool = True,
    ):
        self.labels = [str(x) for x in labels]
        self.n = len(self.labels)
        if self.n == 0:
            raise GroupError("a group needs at least one element")
        if len(set(self.labels)) != self.n:
            raise GroupError("element labels must be distinct")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        t = np.asarray(table, dtype=np.int64)
        if t.shape != (self.n, self.n):
            raise GroupError(f"table shape {t.shape} does not match {self.n} labels")
        if t.min() < 0 or t.max() >= self.n:
            raise GroupError("table entries must index the element list")
        self.table = t
        self.name = name
        # set by table_from_backend when this table mirrors another backend
        self.source: Group | None = None
        self.lift: list | None = None
        self.embed: dict | None = None
        self._find_identity()
        if validate:
            self.validate()
        self.inverse = self._inverses()
        self.rows = self.table.tolist()
        if generators is None:
            self.gens = self._greedy_generators()
        else:
            self.gens = [self._coerce(g) for g in generators]

    def __repr__(self):
        return f"TableGroup({self.name or self.n})"

    def _coerce(self, g):
        if isinstance(g, str):
            if g not in self.index:
                raise GroupError(f"unknown element label {g!r}")
            return self.index[g]
        g = int(g)
        if not 0 <= g < self.n:
            raise GroupError(f"element index {g} out of range")
        return g

    def _find_identity(self):
        ar = np.arange(self.n)
        for e in range(self.n):
            if np.array_equal(self.table[e], ar) and np.array_equal(self.table[:, e], ar):
                self.e = e
                return
        raise GroupError("group axiom violated: no identity element")

    def validate(self):
        t = self.table
        ar = np.arange(self.n)
        for a in range(self.n):
            if not np.array_equal(np.sort(t[a]), ar):
                raise GroupError(f"group axiom violated: row of {self.labels[a]!r} is not a permutation (no inverse)")
            if not np.array_equal(np.sort(t[:, a]), ar):
                raise GroupError(f"group axiom violated: column of {self.labels[a]!r} is not a permutation")
        block = max(1, _ASSOC_TRIPLES // (self.n * self.n))
        for start in range(0, self.n, block):
            a = ar[start:start + block]
            left = t[t[a][:, :, None], ar[None, None, :]]  # (a*b)*c
            right = t[a[:, None, None], t[None, :, :]]  # a*(b*c)
            bad = np.argwhere(left != right)
            if bad.size:
                i, j, k = bad[0]
                raise GroupError(
                    "group axiom violated: associativity fails for "
                    f"({self.labels[a[i]]}, {self.labels[j]}, {self.labels[k]})"
                )

    def _inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == self.e, axis=1)
        if not np.all(self.table[np.arange(self.n), inv] == self.e):
            raise GroupError("group axiom violated: missing inverse")
        return inv.astype(np.int64)

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        mask = self.closure(gens)
        for g in range(self.n):
            if not mask[g]:
                gens.append(g)
                mask = self.closure(gens)
                if mask.all():
                    break
        return gens

    # element contract

    def identity(self):
        return self.e

    def mul(self, a, b):
        return self.rows[a][b]

    def inv(self, a):
        return int(self.inverse[a])

    def contains(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and 0 <= a < self.n

    def is_finite(self) -> bool:
        return True

    def order(self) -> int:
        return self.n

    def elements(self):
        return list(range(self.n))

    def generators(self):
        return list(self.gens)

    def element_to_json(self, a):
        return self.labels[a]

    def element_from_json(self, obj):
        if isinstance(obj, str) and obj in self.index:
            return self.index[obj]
        raise GroupError(f"unknown element label {obj!r}")

    def format_element(self, a):
        return self.labels[a]

    def to_spec(self):
        return {
            "kind": "cayley_table",
            "elements": list(self.labels),
            "table": self.table.tolist(),
            "generators": [self.labels[g] for g in self.gens],
        }

    # subgroup machinery (element masks)

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``gens``."""
        gens = sorted(set(int(g) for g in gens))
        mask = np.zeros(self.n, dtype=bool)
        mask[self.e] = True
        rows = self.rows
        queue = deque([self.e])
        while queue:
            x = queue.popleft()
            rx = rows[x]
            for g in gens:
                y = rx[g]
                if not mask[y]:
                    mask[y] = True
                    queue.append(y)
        return mask

    def conjugacy_closure(self, items: Iterable[int]) -> np.ndarray:
        """Mask of the union of conjugacy classes of ``items``."""
        mask = np.zeros(self.n, dtype=bool)
        for a in set(int(x) for x in items):
            mask[self.conjugacy_class_ids == self.conjugacy_class_ids[a]] = True
        return mask

    def normal_closure(self, items: Iterable[int]) -> np.ndarray:
        mask = self.conjugacy_closure(items)
        return self.closure(np.flatnonzero(mask))

    @cached_property
    def conjugacy_class_ids(self) -> np.ndarray:
        ids = np.full(self.n, -1, dtype=np.int64)
        t, inv = self.table, self.inverse
        allg = np.arange(self.n)
        cid = 0
        for a in range(self.n):
            if ids[a] < 0:
                cls = t[t[inv[allg], a], allg]  # g^-1 a g over all g
                ids[cls] = cid
                cid += 1
        return ids

    def commutator_subgroup(self) -> np.ndarray:
        return self.derived_mask

    @cached_property
    def generating_set(self) -> list[int]:
        """The distinguished generators if they generate, else a greedy generating set."""
        return list(self.gens) if self.closure(self.gens).all() else self._greedy_generators()

    @cached_property
    def derived_mask(self) -> np.ndarray:
        gens = self.generating_set
        comms = {self.commutator(a, b) for a in gens for b in gens}
        return self.normal_closure(comms)

    @cached_property
    def _abelianization(self):
        from ..snf import smith_normal_form
        from .abelian import AbelianForm

        derived = self.derived_mask
        # coset id of each element: elements x, y share a coset iff x^-1 y in [G,G]
        coset = np.full(self.n, -1, dtype=np.int64)
        dmembers = np.flatnonzero(derived)
        reps = []
        for x in range(self.n):
            if coset[x] < 0:
                coset[self.table[x, dmembers]] = len(reps)
                reps.append(x)
        q = len(reps)
        gens = self.generating_set
        k = len(gens)
        if q == 1:
            form = AbelianForm((), 0)
            proj = [()] * self.n
            return form, proj
        # BFS over the quotient assigning exponent vectors; closing edges give relations
        vec = {0: [0] * k}
        queue = deque([0])
        relations = []
        rep_of = reps
        while queue:
            c = queue.popleft()
            x = rep_of[c]
            for i, g in enumerate(gens):
                d = int(coset[self.rows[x][g]])
                step = list(vec[c])
                step[i] += 1
                if d not in vec:
                    vec[d] = step
                    queue.append(d)
                else:
                    rel = [a - b for a, b in zip(step, vec[d])]
                    if any(rel):
                        relations.append(rel)
        _, dmat, v = smith_normal_form(relations)
        diag = [dmat[i][i] if i < len(dmat) else 0 for i in range(k)]
        keep = [i for i in range(k) if diag[i] != 1]
        if any(diag[i] == 0 for i in keep):
            raise GroupError("finite group produced a free abelianization")
        form = AbelianForm(tuple(diag[i] for i in keep), 0)

        def coords(e):
            w = [sum(e[r] * v[r][c] for r in range(k)) for c in range(k)]
            return tuple(w[i] % diag[i] for i in keep)

        proj = [coords(vec[int(coset[x])]) for x in range(self.n)]
        return form, proj

    def abelianization(self):
        form, proj = self._abelianization
        return form, (lambda a: proj[a])

    def as_table(self):
        return self


def table_from_backend(group: Group, generators=None) -> TableGroup:
    """Tabulate a finite backend; ``lift[i]`` is the backend element of index ``i``."""
    elems = sorted(group.elements())
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[group.mul(a, b)] for b in elems] for a in elems]
    gens = generators if generators is not None else group.generators()
    tg = TableGroup(
        [group.format_element(x) for x in elems],
        table,
        generators=[index[g] for g in gens],
        name=repr(group),
        validate=False,
    )
    tg.source = group
    tg.lift = elems
    tg.embed = index
    return tg
