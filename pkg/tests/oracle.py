"""Slow reference implementations used to cross-check the fast code paths.

Everything here works from ``mul``/``inv``/``elements`` alone: no tables,
no integer encoding, no kernels.
"""
from itertools import product


def closure(g, items):
    seen = {g.identity()}
    frontier = list(seen)
    items = list(items)
    while frontier:
        nxt = []
        for a in frontier:
            for s in items:
                b = g.mul(a, s)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def normal_closure(g, items):
    elems = list(g.elements())
    conj = {g.mul(g.mul(g.inv(s), a), s) for a in items for s in elems}
    return closure(g, conj)


def is_generating(g, t):
    return len(closure(g, t)) == g.order()


def is_normally_generating(g, t):
    return len(normal_closure(g, t)) == g.order()


def neighbours(g, t, mode, conjugators):
    n = len(t)
    for i in range(n):
        inv_i = list(t)
        inv_i[i] = g.inv(t[i])
        yield tuple(inv_i)
        for j in range(n):
            if i == j:
                continue
            for b in (t[j], g.inv(t[j])):
                r = list(t)
                r[i] = g.mul(t[i], b)
                yield tuple(r)
                r = list(t)
                r[i] = g.mul(b, t[i])
                yield tuple(r)
        if mode == "ac":
            for s in conjugators:
                for c in (s, g.inv(s)):
                    r = list(t)
                    r[i] = g.mul(g.mul(g.inv(c), t[i]), c)
                    yield tuple(r)


def components(g, n, mode="nielsen", conjugators=None):
    """List of components (as frozensets of tuples) of the Nielsen or AC graph."""
    elems = list(g.elements())
    test = is_normally_generating if mode == "ac" else is_generating
    if conjugators is None:
        conjugators = elems
    vertices = [t for t in product(elems, repeat=n) if test(g, t)]
    left = set(vertices)
    comps = []
    while left:
        start = left.pop()
        comp = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for u in neighbours(g, t, mode, conjugators):
                if u in left:
                    left.discard(u)
                    comp.add(u)
                    stack.append(u)
        comps.append(frozenset(comp))
    return comps


def lower_central_lengths(g):
    elems = list(g.elements())
    cur = set(elems)
    out = [len(cur)]
    while True:
        nxt = closure(g, {g.commutator(a, b) for a in cur for b in elems})
        if len(nxt) == len(cur):
            return out
        cur = nxt
        out.append(len(cur))
