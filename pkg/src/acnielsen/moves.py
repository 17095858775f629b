"""Elementary Nielsen and Andrews-Curtis moves, sequences and certificates.

Indices are 1-based. On a tuple ``t``:

* ``R(i, j, s)``:  t_i <- t_i * t_j^s
* ``L(i, j, s)``:  t_i <- t_j^s * t_i
* ``I(j)``:        t_j <- t_j^-1
* ``AC(i, c, s)``: t_i <- (c^s)^-1 * t_i * c^s

The conjugator ``c`` of an AC move is a word over the group's distinguished
generators when possible, otherwise an explicit element.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .groups import Group, GroupError, group_from_spec, tuple_from_json, tuple_to_json
from .words import Word, evaluate_word, format_word, parse_word


class MoveError(ValueError):
    pass


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    op: str
    i: int = 0
    j: int = 0
    sign: int = 1
    word: Word | None = None
    element: object = None

    def __post_init__(self):
        if self.op not in ("R", "L", "I", "AC"):
            raise MoveError(f"unknown move {self.op!r}")
        if self.sign not in (1, -1):
            raise MoveError("move sign must be +1 or -1")
        if self.op in ("R", "L") and self.i == self.j:
            raise MoveError(f"{self.op} move needs distinct indices, got i = j = {self.i}")
        if self.op == "AC" and (self.word is None) == (self.element is None):
            raise MoveError("AC move needs exactly one of a word or an explicit element conjugator")

    @classmethod
    def R(cls, i: int, j: int, sign: int = 1) -> Move:
        return cls("R", i, j, sign)

    @classmethod
    def L(cls, i: int, j: int, sign: int = 1) -> Move:
        return cls("L", i, j, sign)

    @classmethod
    def I(cls, j: int) -> Move:  # noqa: E743
        return cls("I", 0, j, 1)

    @classmethod
    def AC(cls, i: int, conjugator, sign: int = 1) -> Move:
        if isinstance(conjugator, Word):
            return cls("AC", i, 0, sign, word=conjugator)
        return cls("AC", i, 0, sign, element=conjugator)

    def indices(self) -> tuple[int, ...]:
        if self.op in ("R", "L"):
            return (self.i, self.j)
        if self.op == "I":
            return (self.j,)
        return (self.i,)

    def inverse(self) -> Move:
        if self.op == "I":
            return self
        return Move(self.op, self.i, self.j, -self.sign, self.word, self.element)

    def conjugator(self, group: Group):
        if self.word is not None:
            gens = group.generators()
            if len(gens) != self.word.alphabet_rank:
                raise MoveError(
                    f"conjugator word is over {self.word.alphabet_rank} letters but the group has {len(gens)} generators"
                )
            return evaluate_word(self.word, group, gens)
        return group.check(self.element)

    def to_json(self, group: Group | None = None) -> dict:
        if self.op in ("R", "L"):
            return {"op": self.op, "i": self.i, "j": self.j, "sign": self.sign}
        if self.op == "I":
            return {"op": "I", "j": self.j}
        out = {"op": "AC", "i": self.i}
        if self.word is not None:
            out["s"] = format_word(self.word)
        else:
            if group is None:
                raise MoveError("serializing an explicit-element AC move needs the group")
            out["element"] = group.element_to_json(self.element)
        out["sign"] = self.sign
        return out

    @classmethod
    def from_json(cls, obj: dict, group: Group | None = None) -> Move:
        op = obj.get("op")
        if op in ("R", "L"):
            return cls(op, int(obj["i"]), int(obj["j"]), int(obj.get("sign", 1)))
        if op == "I":
            return cls.I(int(obj["j"]))
        if op == "AC":
            sign = int(obj.get("sign", 1))
            if "s" in obj:
                if group is None:
                    raise MoveError("parsing a word conjugator needs the group")
                return cls.AC(int(obj["i"]), parse_word(obj["s"], max(1, len(group.generators()))), sign)
            if group is None:
                raise MoveError("parsing an element conjugator needs the group")
            return cls.AC(int(obj["i"]), group.element_from_json(obj["element"]), sign)
        raise MoveError(f"unknown move {op!r}")

    def __str__(self):
        sup = "+" if self.sign == 1 else "-"
        if self.op in ("R", "L"):
            return f"{self.op}{sup}({self.i},{self.j})"
        if self.op == "I":
            return f"I({self.j})"
        c = format_word(self.word) if self.word is not None else repr(self.element)
        return f"AC{sup}({self.i},{c})"


@dataclass(frozen=True)
class MoveSequence:
    n: int
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        moves = tuple(self.moves)
        object.__setattr__(self, "moves", moves)
        if self.n < 1:
            raise MoveError("tuple length must be >= 1")
        for m in moves:
            for k in m.indices():
                if not 1 <= k <= self.n:
                    raise MoveError(f"move {m} has index {k} outside 1..{self.n}")

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __add__(self, other: MoveSequence) -> MoveSequence:
        if other.n != self.n:
            raise MoveError("cannot concatenate sequences for different tuple lengths")
        return MoveSequence(self.n, self.moves + other.moves)

    def has_ac(self) -> bool:
        return any(m.op == "AC" for m in self.moves)


def _check_index(t, k):
    if not 1 <= k <= len(t):
        raise MoveError(f"index {k} outside 1..{len(t)}")


def apply_move(group: Group, t: Sequence, m: Move) -> tuple:
    t = list(t)
    for k in m.indices():
        _check_index(t, k)
    if m.op == "R":
        other = t[m.j - 1] if m.sign == 1 else group.inv(t[m.j - 1])
        t[m.i - 1] = group.mul(t[m.i - 1], other)
    elif m.op == "L":
        other = t[m.j - 1] if m.sign == 1 else group.inv(t[m.j - 1])
        t[m.i - 1] = group.mul(other, t[m.i - 1])
    elif m.op == "I":
        t[m.j - 1] = group.inv(t[m.j - 1])
    else:
        c = m.conjugator(group)
        if m.sign == -1:
            c = group.inv(c)
        t[m.i - 1] = group.conjugate(t[m.i - 1], c)
    return tuple(t)


def apply_sequence(group: Group, t: Sequence, ms: MoveSequence | Iterable[Move]) -> tuple:
    if isinstance(ms, MoveSequence) and ms.n != len(t):
        raise MoveError(f"sequence is for {ms.n}-tuples, got a {len(t)}-tuple")
    out = tuple(t)
    for m in ms:
        out = apply_move(group, out, m)
    return out


def invert_sequence(ms: MoveSequence) -> MoveSequence:
    return MoveSequence(ms.n, tuple(m.inverse() for m in reversed(ms.moves)))


def ac_move(group: Group, i: int, element, sign: int = 1) -> Move:
    """AC move conjugating by an element, stored as a generator word when one is available."""
    if group.is_finite():
        from .structure import word_for_element

        w = word_for_element(group, element)
        if w is not None:
            return Move.AC(i, w, sign)
    return Move.AC(i, element, sign)


@dataclass
class Certificate:
    """A replay-checked proof that ``source`` and ``target`` are equivalent."""

    group: Group
    source: tuple
    target: tuple
    moves: MoveSequence
    kind: str = "nielsen"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.source = tuple(self.source)
        self.target = tuple(self.target)
        if self.kind not in ("nielsen", "ac"):
            raise CertificateError(f"unknown certificate kind {self.kind!r}")
        if not isinstance(self.moves, MoveSequence):
            self.moves = MoveSequence(len(self.source), tuple(self.moves))
        if len(self.target) != len(self.source) or self.moves.n != len(self.source):
            raise CertificateError("source, target and moves disagree on tuple length")
        if self.kind == "nielsen" and self.moves.has_ac():
            raise CertificateError("a Nielsen certificate cannot contain AC moves")
        try:
            end = apply_sequence(self.group, self.source, self.moves)
        except (MoveError, GroupError) as exc:
            raise CertificateError(f"moves do not apply: {exc}") from exc
        if end != self.target:
            raise CertificateError("moves do not carry the source to the target")

    def __len__(self):
        return len(self.moves)

    def inverse(self) -> Certificate:
        return Certificate(self.group, self.target, self.source, invert_sequence(self.moves), self.kind, dict(self.metadata))

    def then(self, other: Certificate) -> Certificate:
        if other.source != self.target:
            raise CertificateError("certificates do not chain")
        kind = "ac" if "ac" in (self.kind, other.kind) else "nielsen"
        steps = self.metadata.get("steps", []) + other.metadata.get("steps", [])
        meta = {**self.metadata, **other.metadata, "steps": steps}
        return Certificate(self.group, self.source, other.target, self.moves + other.moves, kind, meta)

    def to_json(self) -> dict:
        g = self.group
        return {
            "kind": self.kind,
            "group": g.to_spec(),
            "source": tuple_to_json(g, self.source),
            "target": tuple_to_json(g, self.target),
            "moves": [m.to_json(g) for m in self.moves],
            "metadata": self.metadata,
            "replay": True,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict, group: Group | None = None) -> Certificate:
        g = group if group is not None else group_from_spec(obj["group"])
        src = tuple_from_json(g, obj["source"])
        tgt = tuple_from_json(g, obj["target"])
        moves = MoveSequence(len(src), tuple(Move.from_json(m, g) for m in obj["moves"]))
        return cls(g, src, tgt, moves, obj.get("kind", "nielsen"), obj.get("metadata", {}))


def nielsen_swap(i: int, j: int) -> list[Move]:
    """Moves exchanging entries i and j in any group: (a, b) -> (a, ba) -> (b^-1, ba) -> (b^-1, a) -> (b, a)."""
    return [Move.R(j, i, 1), Move.R(i, j, -1), Move.L(j, i, 1), Move.I(i)]
