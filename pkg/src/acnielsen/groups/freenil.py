"""Free nilpotent groups F_2(c), c <= 3, in Mal'cev coordinates.

An element ``(a, b, e, f, g)`` stands for the normal word

    x^a y^b [y,x]^e [y,x,x]^f [y,x,y]^g

with left-normed commutators. Products are formed by collecting one
syllable at a time into normal order using

    y^b x^k   = x^k y^b [y,x]^(kb) [y,x,x]^(b C(k,2)) [y,x,y]^(k C(b,2))
    c^e x^k   = x^k c^e [y,x,x]^(ek)        (c = [y,x])
    c^e y^k   = y^k c^e [y,x,y]^(ek)

and discarding commutators of weight above the class.
"""
from __future__ import annotations

from functools import cached_property

from .abelian import AbelianForm
from .base import INFINITE, Group, GroupError

BASIS = ("x", "y", "[y,x]", "[y,x,x]", "[y,x,y]")
# weight of each basis letter
WEIGHTS = (1, 1, 2, 3, 3)


def _c2(n: int) -> int:
    return n * (n - 1) // 2


class FreeNilpotentGroup(Group):
    kind = "free_nilpotent"
    known_class_c = True

    def __init__(self, rank: int = 2, nil_class: int = 3):
        if rank != 2:
            raise GroupError("only free nilpotent groups of rank 2 are supported")
        if nil_class not in (1, 2, 3):
            raise GroupError("nilpotency class must be 1, 2 or 3")
        self.rank = 2
        self.nil_class = int(nil_class)
        self._live = tuple(w <= self.nil_class for w in WEIGHTS)

    def __repr__(self):
        return f"FreeNilpotentGroup(rank=2, class={self.nil_class})"

    def __eq__(self, other):
        return isinstance(other, FreeNilpotentGroup) and other.nil_class == self.nil_class

    def __hash__(self):
        return hash(("free_nilpotent", self.nil_class))

    def _trunc(self, v):
        return tuple(c if live else 0 for c, live in zip(v, self._live))

    def element(self, coords):
        coords = list(coords)
        if len(coords) > 5:
            raise GroupError("Mal'cev vectors have at most 5 coordinates")
        coords += [0] * (5 - len(coords))
        return self._trunc(int(c) for c in coords)

    # collection

    def collect_syllable(self, v, letter: int, k: int):
        """Right-multiply the normal form ``v`` by ``basis[letter]^k``."""
        a, b, e, f, g = v
        if letter == 0:
            a, e, f, g = a + k, e + k * b, f + b * _c2(k) + e * k, g + k * _c2(b)
        elif letter == 1:
            b, g = b + k, g + e * k
        elif letter == 2:
            e += k
        elif letter == 3:
            f += k
        else:
            g += k
        return self._trunc((a, b, e, f, g))

    def identity(self):
        return (0, 0, 0, 0, 0)

    def mul(self, u, v):
        out = u
        for letter, k in enumerate(v):
            if k:
                out = self.collect_syllable(out, letter, k)
        return out

    def inv(self, u):
        out = self.identity()
        for letter in reversed(range(5)):
            if u[letter]:
                out = self.collect_syllable(out, letter, -u[letter])
        return out

    def contains(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == 5
            and all(isinstance(c, int) for c in a)
            and self._trunc(a) == a
        )

    def generators(self):
        return [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)]

    def basis_element(self, name: str):
        i = BASIS.index(name)
        if not self._live[i]:
            raise GroupError(f"{name} is trivial in class {self.nil_class}")
        return self.element([int(j == i) for j in range(5)])

    def element_order(self, a):
        return 1 if not any(a) else INFINITE

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, obj):
        return self.element(obj)

    def format_element(self, a):
        return "(" + ",".join(map(str, a)) + ")"

    def to_spec(self):
        return {"kind": "free_nilpotent", "rank": 2, "class": self.nil_class}

    @cached_property
    def abelian_form(self) -> AbelianForm:
        return AbelianForm((), 2)

    def abelianization(self):
        return self.abelian_form, (lambda a: (a[0], a[1]))
