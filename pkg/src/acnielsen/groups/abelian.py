"""Finitely generated abelian groups Z_m1 x ... x Z_mr x Z^s."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product
from math import gcd, prod

from .base import INFINITE, Group, GroupError


@dataclass(frozen=True)
class AbelianForm:
    """Invariant-factor presentation: torsion m1 | m2 | ... | mr, free rank s."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        torsion = tuple(int(m) for m in self.torsion)
        object.__setattr__(self, "torsion", torsion)
        if self.free_rank < 0:
            raise GroupError("free rank must be non-negative")
        for m in torsion:
            if m < 2:
                raise GroupError(f"torsion coefficient {m} must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise GroupError(f"divisibility chain violated: {a} does not divide {b}")

    @property
    def rank(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return self.torsion + (0,) * self.free_rank

    def order(self):
        return prod(self.torsion) if self.free_rank == 0 else INFINITE

    def __str__(self):
        parts = [f"Z_{m}" for m in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) or "1"

    @classmethod
    def from_orders(cls, orders) -> AbelianForm:
        """Normalize an arbitrary list of cyclic orders (0 = infinite) to invariant factors."""
        from ..snf import invariant_factors

        orders = [int(m) for m in orders]
        free = sum(1 for m in orders if m == 0)
        finite = [m for m in orders if m not in (0, 1)]
        if not finite:
            return cls((), free)
        diag = [[m if i == j else 0 for j in range(len(finite))] for i, m in enumerate(finite)]
        factors = [d for d in invariant_factors(diag) if d != 1]
        return cls(tuple(factors), free)


class AbelianGroup(Group):
    kind = "abelian"
    known_class_c = True

    def __init__(self, torsion=(), free_rank: int = 0):
        self.form = AbelianForm(tuple(torsion), free_rank)
        self.moduli = self.form.moduli
        self.dim = len(self.moduli)

    @classmethod
    def from_form(cls, form: AbelianForm) -> AbelianGroup:
        return cls(form.torsion, form.free_rank)

    def __repr__(self):
        return f"AbelianGroup({self.form})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.form == self.form

    def __hash__(self):
        return hash(("abelian", self.form))

    def _norm(self, v):
        return tuple(x % m if m else x for x, m in zip(v, self.moduli))

    def identity(self):
        return (0,) * self.dim

    def mul(self, a, b):
        return self._norm(x + y for x, y in zip(a, b))

    def inv(self, a):
        return self._norm(-x for x in a)

    def pow(self, a, k):
        return self._norm(k * x for x in a)

    def contains(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.dim
            and all(isinstance(x, int) for x in a)
            and self._norm(a) == a
        )

    def element(self, coords):
        if len(coords) != self.dim:
            raise GroupError(f"expected {self.dim} coordinates, got {len(coords)}")
        return self._norm(int(x) for x in coords)

    def is_finite(self) -> bool:
        return self.form.free_rank == 0

    def order(self):
        return self.form.order()

    def elements(self):
        if not self.is_finite():
            return super().elements()
        return [tuple(v) for v in product(*(range(m) for m in self.moduli))]

    def generators(self):
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]

    def element_order(self, a):
        if any(x for x, m in zip(a, self.moduli) if m == 0):
            return INFINITE
        orders = [m // gcd(x, m) for x, m in zip(a, self.moduli)]
        return reduce(lambda p, q: p * q // gcd(p, q), orders, 1)

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, obj):
        if isinstance(obj, int):
            obj = [obj]
        return self.element(obj)

    def format_element(self, a):
        return "(" + ",".join(map(str, a)) + ")"

    def to_spec(self):
        return {"kind": "abelian", "torsion": list(self.form.torsion), "free_rank": self.form.free_rank}

    def abelianization(self):
        return self.form, (lambda a: a)

    @cached_property
    def _table(self):
        from .table import table_from_backend

        return table_from_backend(self)

    def as_table(self):
        if not self.is_finite():
            return super().as_table()
        return self._table
