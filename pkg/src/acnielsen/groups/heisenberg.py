"""Discrete Heisenberg groups H_k, over the integers or reduced mod m.

Elements are coordinate tuples ``(x1..xk, y1..yk, z)`` with

    (x, y, z)(x', y', z') = (x + x', y + y', z + z' + x . y')
    (x, y, z)^-1          = (-x, -y, x . y - z)
"""
from __future__ import annotations

from functools import cached_property
from itertools import product

from .abelian import AbelianForm
from .base import INFINITE, Group, GroupError


class HeisenbergGroup(Group):
    kind = "heisenberg"
    known_class_c = True

    def __init__(self, k: int, modulus: int | None = None):
        if k < 1:
            raise GroupError("Heisenberg dimension k must be >= 1")
        if modulus is not None and modulus < 2:
            raise GroupError("modulus must be >= 2")
        self.k = int(k)
        self.modulus = None if modulus is None else int(modulus)
        self.dim = 2 * self.k + 1

    def __repr__(self):
        mod = "" if self.modulus is None else f", mod {self.modulus}"
        return f"HeisenbergGroup(k={self.k}{mod})"

    def __eq__(self, other):
        return isinstance(other, HeisenbergGroup) and (other.k, other.modulus) == (self.k, self.modulus)

    def __hash__(self):
        return hash(("heisenberg", self.k, self.modulus))

    def _norm(self, v):
        m = self.modulus
        return tuple(v) if m is None else tuple(c % m for c in v)

    def element(self, coords):
        if len(coords) != self.dim:
            raise GroupError(f"H_{self.k} elements have {self.dim} coordinates, got {len(coords)}")
        return self._norm(int(c) for c in coords)

    def identity(self):
        return (0,) * self.dim

    def mul(self, a, b):
        k = self.k
        z = a[-1] + b[-1] + sum(a[i] * b[k + i] for i in range(k))
        out = [a[i] + b[i] for i in range(2 * k)]
        out.append(z)
        return self._norm(out)

    def inv(self, a):
        k = self.k
        out = [-c for c in a[:-1]]
        out.append(sum(a[i] * a[k + i] for i in range(k)) - a[-1])
        return self._norm(out)

    def contains(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.dim
            and all(isinstance(c, int) for c in a)
            and self._norm(a) == a
        )

    def is_finite(self) -> bool:
        return self.modulus is not None

    def order(self):
        return INFINITE if self.modulus is None else self.modulus ** self.dim

    def elements(self):
        if self.modulus is None:
            return super().elements()
        return [tuple(v) for v in product(range(self.modulus), repeat=self.dim)]

    def generators(self):
        """The unit vectors e_1, ..., e_2k (zero central coordinate)."""
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(2 * self.k)]

    def central_generator(self):
        return (0,) * (self.dim - 1) + (1,)

    def element_order(self, a):
        if self.modulus is None:
            return 1 if not any(a) else INFINITE
        return super().element_order(a)

    def project(self, a):
        """Image in the abelianization (drop the central coordinate)."""
        return tuple(a[:-1])

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, obj):
        return self.element(obj)

    def format_element(self, a):
        return "(" + ",".join(map(str, a)) + ")"

    def to_spec(self):
        return {"kind": "heisenberg", "k": self.k, "modulus": self.modulus}

    @cached_property
    def abelian_form(self) -> AbelianForm:
        if self.modulus is None:
            return AbelianForm((), 2 * self.k)
        return AbelianForm((self.modulus,) * (2 * self.k), 0)

    def abelianization(self):
        return self.abelian_form, self.project

    @cached_property
    def _table(self):
        from .table import table_from_backend

        return table_from_backend(self)

    def as_table(self):
        if self.modulus is None:
            return super().as_table()
        return self._table
