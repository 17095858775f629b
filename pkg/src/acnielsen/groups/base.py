from __future__ import annotations

import math
from typing import Hashable, Sequence

INFINITE = math.inf

Element = Hashable


class GroupError(ValueError):
    """Invalid group data or an operation the backend cannot perform."""


class Group:
    """Common element contract shared by every backend.

    Elements are immutable hashable values in canonical form, so ``==`` on
    elements is equality in the group.
    """

    kind: str = "abstract"
    # class-C (every maximal subgroup normal) known a priori for the backend
    known_class_c: bool = False

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def order(self) -> int | float:
        return INFINITE

    def elements(self) -> list[Element]:
        raise GroupError(f"{self.kind} group is infinite; elements cannot be listed")

    def generators(self) -> list[Element]:
        """Distinguished generators (the images of x1, x2, ... for word input)."""
        raise NotImplementedError

    def element_to_json(self, a: Element):
        raise NotImplementedError

    def element_from_json(self, obj) -> Element:
        raise NotImplementedError

    def format_element(self, a: Element) -> str:
        return str(self.element_to_json(a))

    def to_spec(self) -> dict:
        raise NotImplementedError

    def abelianization(self):
        """Return ``(AbelianForm, projection)``; projection maps into AbelianGroup coordinates."""
        raise NotImplementedError

    # derived operations

    def pow(self, a: Element, k: int) -> Element:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def commutator(self, a: Element, b: Element) -> Element:
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def conjugate(self, a: Element, s: Element) -> Element:
        """``a^s = s^-1 a s``."""
        return self.mul(self.mul(self.inv(s), a), s)

    def product(self, items: Sequence[Element]) -> Element:
        acc = self.identity()
        for x in items:
            acc = self.mul(acc, x)
        return acc

    def element_order(self, a: Element) -> int | float:
        e = self.identity()
        x = a
        k = 1
        limit = self.order()
        while x != e:
            x = self.mul(x, a)
            k += 1
            if k > limit:
                return INFINITE
        return k

    def check(self, a: Element) -> Element:
        if not self.contains(a):
            raise GroupError(f"{a!r} is not an element of {self}")
        return a

    def check_tuple(self, t: Sequence[Element]) -> tuple:
        if len(t) < 1:
            raise GroupError("tuples must have at least one entry")
        return tuple(self.check(a) for a in t)

    def as_table(self):
        """Finite backends: an equivalent TableGroup (cached) with ``embed``/``lift`` maps."""
        raise GroupError(f"{self.kind} group is infinite; no Cayley table")
