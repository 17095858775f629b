"""Free-group words over a ranked alphabet x1, ..., xn.

Text grammar (whitespace and ``*`` separators are ignored)::

    word   := factor*  |  "1"
    factor := atom ("^" int)?
    atom   := "x" int  |  "[" word ("," word)+ "]"  |  "(" word ")"  |  "1"

Commutators are left-normed: ``[a,b] = a^-1 b^-1 a b`` and
``[a,b,c] = [[a,b],c]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Letter = tuple[int, int]


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    alphabet_rank: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.alphabet_rank < 1:
            raise ValueError("alphabet_rank must be positive")
        letters = tuple((int(g), int(s)) for g, s in self.letters)
        for g, s in letters:
            if not 1 <= g <= self.alphabet_rank:
                raise ValueError(f"generator index {g} outside [1, {self.alphabet_rank}]")
            if s not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def empty(cls, alphabet_rank: int) -> Word:
        return cls(alphabet_rank, ())

    @classmethod
    def generator(cls, alphabet_rank: int, index: int, exponent: int = 1) -> Word:
        sign = 1 if exponent >= 0 else -1
        return cls(alphabet_rank, ((index, sign),) * abs(exponent))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet_rank != self.alphabet_rank:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.alphabet_rank, self.letters + other.letters)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(self.alphabet_rank, base.letters * abs(k))

    def inverse(self) -> Word:
        return Word(self.alphabet_rank, tuple((g, -s) for g, s in reversed(self.letters)))

    def is_reduced(self) -> bool:
        return all(a[0] != b[0] or a[1] != -b[1] for a, b in zip(self.letters, self.letters[1:]))

    def reduce(self) -> Word:
        return free_reduce(self)

    def exponent_sums(self) -> list[int]:
        sums = [0] * self.alphabet_rank
        for g, s in self.letters:
            sums[g - 1] += s
        return sums

    def __str__(self):
        return format_word(self)


def free_reduce(w: Word) -> Word:
    stack: list[Letter] = []
    for g, s in w.letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return Word(w.alphabet_rank, tuple(stack))


def commutator(a: Word, b: Word) -> Word:
    return a.inverse() * b.inverse() * a * b


def format_word(w: Word) -> str:
    """Render ``w`` in the parse grammar, grouping runs into powers."""
    if not w.letters:
        return "1"
    parts = []
    i = 0
    letters = w.letters
    while i < len(letters):
        g, s = letters[i]
        j = i
        while j < len(letters) and letters[j] == (g, s):
            j += 1
        e = s * (j - i)
        parts.append(f"x{g}" if e == 1 else f"x{g}^{e}")
        i = j
    return "*".join(parts)


_TOKEN = re.compile(r"\s*(?:(x\d+)|(-?\d+)|(\^)|(\[)|(\])|(\()|(\))|(,)|(\*))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(0).strip())
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], rank: int):
        self.tokens = tokens
        self.pos = 0
        self.rank = rank

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise WordSyntaxError(f"expected {expected or 'token'}, got {tok!r}")
        self.pos += 1
        return tok

    def word(self) -> Word:
        out = Word.empty(self.rank)
        while self.peek() not in (None, "]", ")", ","):
            out = out * self.factor()
            if self.peek() == "*":
                self.take("*")
                if self.peek() in (None, "]", ")", ",", "*"):
                    raise WordSyntaxError("'*' must be followed by a factor")
        return out

    def factor(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            tok = self.take()
            if not re.fullmatch(r"-?\d+", tok):
                raise WordSyntaxError(f"bad exponent {tok!r}")
            base = base ** int(tok)
        return base

    def atom(self) -> Word:
        tok = self.take()
        if tok.startswith("x"):
            index = int(tok[1:])
            if not 1 <= index <= self.rank:
                raise WordSyntaxError(f"generator x{index} outside alphabet of rank {self.rank}")
            return Word.generator(self.rank, index)
        if tok == "1":
            return Word.empty(self.rank)
        if tok == "(":
            inner = self.word()
            self.take(")")
            return inner
        if tok == "[":
            terms = [self.word()]
            while self.peek() == ",":
                self.take(",")
                terms.append(self.word())
            self.take("]")
            if len(terms) < 2:
                raise WordSyntaxError("commutator needs at least two entries")
            acc = terms[0]
            for t in terms[1:]:
                acc = commutator(acc, t)
            return acc
        raise WordSyntaxError(f"unexpected token {tok!r}")


def parse_word(text: str, alphabet_rank: int) -> Word:
    if alphabet_rank < 1:
        raise ValueError("alphabet_rank must be positive")
    tokens = _tokenize(text)
    if not tokens:
        raise WordSyntaxError("empty input (use '1' for the empty word)")
    parser = _Parser(tokens, alphabet_rank)
    w = parser.word()
    if parser.peek() is not None:
        raise WordSyntaxError(f"trailing input at token {parser.peek()!r}")
    return w


def evaluate_word(w: Word, group, assignment: Sequence):
    """Image of ``w`` under the homomorphism sending x_i to ``assignment[i-1]``."""
    if len(assignment) != w.alphabet_rank:
        raise ValueError(
            f"assignment has {len(assignment)} entries, word alphabet has rank {w.alphabet_rank}"
        )
    inverses: dict[int, object] = {}
    acc = group.identity()
    for g, s in w.letters:
        if s == 1:
            acc = group.mul(acc, assignment[g - 1])
        else:
            if g not in inverses:
                inverses[g] = group.inv(assignment[g - 1])
            acc = group.mul(acc, inverses[g])
    return acc


def word_from_letters(alphabet_rank: int, letters: Iterable[Letter]) -> Word:
    return Word(alphabet_rank, tuple(letters))
