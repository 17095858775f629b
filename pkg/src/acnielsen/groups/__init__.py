"""Group backends behind one element contract.

Backends: ``cayley_table`` (TableGroup), ``abelian`` (AbelianGroup),
``heisenberg`` (HeisenbergGroup, optionally mod m) and ``free_nilpotent``
(FreeNilpotentGroup, rank 2, class <= 3).
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .abelian import AbelianForm, AbelianGroup
from .base import INFINITE, Group, GroupError
from .freenil import FreeNilpotentGroup
from .heisenberg import HeisenbergGroup
from .table import TableGroup, table_from_backend


def group_from_spec(spec: dict) -> Group:
    """Build a validated group from its JSON spec dict."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise GroupError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "abelian":
        return AbelianGroup(tuple(spec.get("torsion", ())), int(spec.get("free_rank", 0)))
    if kind == "cayley_table":
        for key in ("elements", "table"):
            if key not in spec:
                raise GroupError(f"cayley_table spec needs '{key}'")
        return TableGroup(spec["elements"], spec["table"], generators=spec.get("generators"), name=spec.get("name"))
    if kind == "heisenberg":
        return HeisenbergGroup(int(spec.get("k", 1)), spec.get("modulus"))
    if kind == "free_nilpotent":
        return FreeNilpotentGroup(int(spec.get("rank", 2)), int(spec.get("class", 3)))
    raise GroupError(f"unknown group kind {kind!r}")


def load_group(path) -> Group:
    with open(Path(path)) as fh:
        return group_from_spec(json.load(fh))


def mul(g: Group, a, b):
    return g.mul(g.check(a), g.check(b))


def inv(g: Group, a):
    return g.inv(g.check(a))


def element_order(g: Group, a):
    return g.element_order(g.check(a))


def abelianization(g: Group):
    return g.abelianization()


def parse_element(g: Group, text: str):
    """Parse an element literal: ``(1,0,5)`` coordinates or a table label."""
    text = text.strip()
    if isinstance(g, TableGroup):
        return g.element_from_json(text)
    if re.fullmatch(r"\(?\s*-?\d+(\s*,\s*-?\d+)*\s*\)?", text):
        return g.element_from_json([int(x) for x in re.findall(r"-?\d+", text)])
    raise GroupError(f"cannot parse element literal {text!r} for {g.kind} group")


def parse_tuple(g: Group, text: str) -> tuple:
    """Parse ``"a;b;c"`` into a tuple of elements."""
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise GroupError("empty tuple literal")
    return tuple(parse_element(g, p) for p in parts)


def tuple_from_words(g: Group, text: str) -> tuple:
    """Evaluate ``"w1;w2;..."`` words over the group's distinguished generators."""
    from ..words import evaluate_word, parse_word

    gens = g.generators()
    if not gens:
        raise GroupError("group has no distinguished generators")
    return tuple(evaluate_word(parse_word(p, len(gens)), g, gens) for p in text.split(";") if p.strip())


def tuple_to_json(g: Group, t) -> list:
    return [g.element_to_json(a) for a in t]


def tuple_from_json(g: Group, obj) -> tuple:
    return g.check_tuple(tuple(g.element_from_json(x) for x in obj))


__all__ = [
    "INFINITE",
    "AbelianForm",
    "AbelianGroup",
    "FreeNilpotentGroup",
    "Group",
    "GroupError",
    "HeisenbergGroup",
    "TableGroup",
    "abelianization",
    "element_order",
    "group_from_spec",
    "inv",
    "load_group",
    "mul",
    "parse_element",
    "parse_tuple",
    "table_from_backend",
    "tuple_from_json",
    "tuple_from_words",
    "tuple_to_json",
]
