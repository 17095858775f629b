"""Hot loops over encoded tuple spaces.

A tuple ``(t_1, ..., t_n)`` of table indices is encoded as the integer
``sum t_p * N**(n-1-p)``; lexicographic order on tuples is numeric order on
codes. Moves are rows ``(kind, i, j, c)`` of an int64 array with 0-based
positions:

    0: t_i <- t_i t_j      1: t_i <- t_i t_j^-1
    2: t_i <- t_j t_i      3: t_i <- t_j^-1 t_i
    4: t_i <- t_i^-1       5: t_i <- c^-1 t_i c

Every kernel has a numba version and a numpy/scipy version with identical
results; ``backend`` picks one, defaulting to the ``ACNIELSEN_NUMBA`` flag.
"""
from __future__ import annotations

import numpy as np

from . import _accel

R_POS, R_NEG, L_POS, L_NEG, INV, CONJ = range(6)

# rows per vectorized block in the numpy path
_BLOCK_CELLS = 1 << 20


def _use_numba(backend: str | None) -> bool:
    if backend is None:
        return _accel.USE_NUMBA
    if backend == "numba":
        if not _accel.HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown kernel backend {backend!r}")


def powers(order: int, n: int) -> np.ndarray:
    return np.array([order ** (n - 1 - p) for p in range(n)], dtype=np.int64)


def encode(t, order: int) -> int:
    code = 0
    for x in t:
        code = code * order + int(x)
    return code


def decode(code: int, order: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        code, r = divmod(code, order)
        out.append(r)
    return tuple(reversed(out))


def decode_many(codes: np.ndarray, order: int, n: int) -> np.ndarray:
    digits = np.empty((len(codes), n), dtype=np.int64)
    rest = codes.astype(np.int64, copy=True)
    for p in range(n - 1, -1, -1):
        digits[:, p] = rest % order
        rest //= order
    return digits


# numpy path

def _new_digit_np(table, inv, digits, move):
    kind, i, j, c = (int(x) for x in move)
    a = digits[:, i]
    if kind == R_POS:
        return table[a, digits[:, j]]
    if kind == R_NEG:
        return table[a, inv[digits[:, j]]]
    if kind == L_POS:
        return table[digits[:, j], a]
    if kind == L_NEG:
        return table[inv[digits[:, j]], a]
    if kind == INV:
        return inv[a]
    return table[table[inv[c], a], c]


def neighbor_codes_np(table, inv, codes, n, move):
    """Codes reached from ``codes`` by one move row."""
    order = table.shape[0]
    pw = powers(order, n)
    digits = decode_many(codes, order, n)
    i = int(move[1])
    new = _new_digit_np(table, inv, digits, move)
    return codes + (new - digits[:, i]) * pw[i]


def _membership_np(table, inv, n, conj_gens, normal, shorter):
    order = table.shape[0]
    total = order ** n
    out = np.zeros(total, dtype=bool)
    ident = _identity(table)
    # conjugation permutations: conj[g][k] = g^-1 k g
    conj = [table[table[inv[g], :], g] for g in conj_gens] if normal else []
    block = max(1, _BLOCK_CELLS // order)
    for start in range(0, total, block):
        codes = np.arange(start, min(total, start + block), dtype=np.int64)
        if shorter.shape[0]:
            known = shorter[codes // order] | shorter[codes % shorter.shape[0]]
            out[codes[known]] = True
            codes = codes[~known]
            if not len(codes):
                continue
        digits = decode_many(codes, order, n)
        rows = np.arange(len(codes))[:, None]
        m = np.zeros((len(codes), order), dtype=bool)
        m[:, ident] = True
        for p in range(n):
            m[rows[:, 0], digits[:, p]] = True
        # k in M*x  <=>  k x^-1 in M ; right division tables per slot
        shifts = []
        for p in range(n):
            shifts.append(table[:, inv[digits[:, p]]].T)
            shifts.append(table[:, digits[:, p]].T)
        while True:
            new = m.copy()
            for idx in shifts:
                new |= m[rows, idx]
            for perm in conj:
                new |= m[:, perm]
            if np.array_equal(new, m):
                break
            m = new
        out[codes] = m.all(axis=1)
    return out


def _components_np(table, inv, n, mask, moves):
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    order = table.shape[0]
    verts = np.flatnonzero(mask).astype(np.int64)
    nv = len(verts)
    rep = np.full(mask.shape[0], -1, dtype=np.int64)
    if nv == 0:
        return rep
    src_parts, dst_parts = [], []
    block = max(1, _BLOCK_CELLS // max(1, n))
    for start in range(0, nv, block):
        codes = verts[start:start + block]
        local = np.arange(start, start + len(codes), dtype=np.int64)
        for move in moves:
            nb = neighbor_codes_np(table, inv, codes, n, move)
            pos = np.searchsorted(verts, nb)
            keep = pos != local
            src_parts.append(local[keep])
            dst_parts.append(pos[keep])
    src = np.concatenate(src_parts) if src_parts else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(nv, nv)).tocsr()
    _, labels = connected_components(graph, directed=False)
    mins = np.full(labels.max() + 1, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(mins, labels, verts)
    rep[verts] = mins[labels]
    return rep


def _bfs_np(table, inv, n, moves, source, target):
    order = table.shape[0]
    total = order ** n
    parent = np.full(total, -1, dtype=np.int64)
    via = np.full(total, -1, dtype=np.int64)
    parent[source] = source
    frontier = np.array([source], dtype=np.int64)
    nm = len(moves)
    while len(frontier) and parent[target] < 0:
        # neighbours laid out frontier-major, move-minor: same order as a FIFO queue
        nbrs = np.empty((len(frontier), nm), dtype=np.int64)
        for k, move in enumerate(moves):
            nbrs[:, k] = neighbor_codes_np(table, inv, frontier, n, move)
        flat = nbrs.ravel()
        fresh = parent[flat] < 0
        idx = np.flatnonzero(fresh)
        if len(idx) == 0:
            break
        uniq, first = np.unique(flat[idx], return_index=True)
        first_idx = idx[first]
        order_found = np.argsort(first_idx, kind="stable")
        found = uniq[order_found]
        pos = first_idx[order_found]
        parent[found] = frontier[pos // nm]
        via[found] = pos % nm
        frontier = found
    return parent, via


# numba path

if _accel.HAVE_NUMBA:
    from numba import njit, prange

    @njit(cache=True, inline="always")
    def _new_digit_nb(table, inv, digits, kind, i, j, c):
        a = digits[i]
        if kind == 0:
            return table[a, digits[j]]
        if kind == 1:
            return table[a, inv[digits[j]]]
        if kind == 2:
            return table[digits[j], a]
        if kind == 3:
            return table[inv[digits[j]], a]
        if kind == 4:
            return inv[a]
        return table[table[inv[c], a], c]

    @njit(cache=True)
    def _decode_nb(code, order, n, digits):
        for p in range(n - 1, -1, -1):
            digits[p] = code % order
            code //= order

    @njit(cache=True, parallel=True)
    def _membership_nb(table, inv, n, conj_gens, normal, ident, shorter):
        order = table.shape[0]
        total = order ** n
        ns = shorter.shape[0]
        out = np.zeros(total, dtype=np.bool_)
        nchunks = min(total, 64)
        per = (total + nchunks - 1) // nchunks
        ng = conj_gens.shape[0]
        for ch in prange(nchunks):
            seen = np.zeros(order, dtype=np.int64)
            queue = np.empty(order, dtype=np.int64)
            digits = np.empty(n, dtype=np.int64)
            invd = np.empty(n, dtype=np.int64)
            lo = ch * per
            hi = min(total, lo + per)
            for code in range(lo, hi):
                if ns and (shorter[code // order] or shorter[code % ns]):
                    out[code] = True
                    continue
                stamp = code + 1
                _decode_nb(code, order, n, digits)
                for p in range(n):
                    invd[p] = inv[digits[p]]
                head = 0
                tail = 0
                seen[ident] = stamp
                queue[tail] = ident
                tail += 1
                while head < tail:
                    y = queue[head]
                    head += 1
                    for p in range(n):
                        for z in (table[y, digits[p]], table[y, invd[p]]):
                            if seen[z] != stamp:
                                seen[z] = stamp
                                queue[tail] = z
                                tail += 1
                    if normal:
                        for q in range(ng):
                            g = conj_gens[q]
                            z = table[table[inv[g], y], g]
                            if seen[z] != stamp:
                                seen[z] = stamp
                                queue[tail] = z
                                tail += 1
                out[code] = tail == order
        return out

    @njit(cache=True)
    def _find(parent, x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    @njit(cache=True)
    def _components_nb(table, inv, n, mask, moves):
        order = table.shape[0]
        total = mask.shape[0]
        pw = np.empty(n, dtype=np.int64)
        acc = 1
        for p in range(n - 1, -1, -1):
            pw[p] = acc
            acc *= order
        parent = np.arange(total)
        digits = np.empty(n, dtype=np.int64)
        for code in range(total):
            if not mask[code]:
                continue
            _decode_nb(code, order, n, digits)
            for k in range(moves.shape[0]):
                i = moves[k, 1]
                new = _new_digit_nb(table, inv, digits, moves[k, 0], i, moves[k, 2], moves[k, 3])
                nb = code + (new - digits[i]) * pw[i]
                ra = _find(parent, code)
                rb = _find(parent, nb)
                if ra != rb:
                    # smaller code becomes the root: roots are component minima
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
        rep = np.full(total, -1, dtype=np.int64)
        for code in range(total):
            if mask[code]:
                rep[code] = _find(parent, code)
        return rep

    @njit(cache=True)
    def _bfs_nb(table, inv, n, moves, source, target):
        order = table.shape[0]
        total = order ** n
        pw = np.empty(n, dtype=np.int64)
        acc = 1
        for p in range(n - 1, -1, -1):
            pw[p] = acc
            acc *= order
        parent = np.full(total, -1, dtype=np.int64)
        via = np.full(total, -1, dtype=np.int64)
        queue = np.empty(total, dtype=np.int64)
        digits = np.empty(n, dtype=np.int64)
        parent[source] = source
        queue[0] = source
        head = 0
        tail = 1
        while head < tail and parent[target] < 0:
            code = queue[head]
            head += 1
            _decode_nb(code, order, n, digits)
            for k in range(moves.shape[0]):
                i = moves[k, 1]
                new = _new_digit_nb(table, inv, digits, moves[k, 0], i, moves[k, 2], moves[k, 3])
                nb = code + (new - digits[i]) * pw[i]
                if parent[nb] < 0:
                    parent[nb] = code
                    via[nb] = k
                    queue[tail] = nb
                    tail += 1
        return parent, via


# dispatch

def _identity(table) -> int:
    return int(np.flatnonzero((table == np.arange(table.shape[0])[None, :]).all(axis=1))[0])


def membership_mask(table, inv, n: int, conj_gens=None, normal: bool = False, backend: str | None = None) -> np.ndarray:
    """``mask[code]`` is True iff the tuple generates (``normal``: normally generates) the group.

    ``conj_gens`` must generate the group when ``normal`` is set.
    """
    table = np.ascontiguousarray(table, dtype=np.int64)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    cg = np.ascontiguousarray(np.asarray(conj_gens if conj_gens is not None else [], dtype=np.int64))
    # a tuple generates as soon as it does with its first or last entry dropped
    if n > 1:
        shorter = membership_mask(table, inv, n - 1, cg, normal, backend)
    else:
        shorter = np.zeros(0, dtype=np.bool_)
    if _use_numba(backend):
        return _membership_nb(table, inv, n, cg, bool(normal), _identity(table), shorter)
    return _membership_np(table, inv, n, cg, bool(normal), shorter)


def _one_per_inverse_pair(moves, inv):
    # edges are undirected: R-/L- undo R+/L+ and conjugating by c^-1 undoes c
    kind, c = moves[:, 0], moves[:, 3]
    keep = (kind != R_NEG) & (kind != L_NEG) & ((kind != CONJ) | (c <= inv[c]))
    return np.ascontiguousarray(np.unique(moves[keep], axis=0))


def component_minima(table, inv, n: int, mask, moves, backend: str | None = None) -> np.ndarray:
    """For each vertex code, the least code of its component; -1 off the vertex set."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    moves = np.ascontiguousarray(moves, dtype=np.int64).reshape(-1, 4)
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    moves = _one_per_inverse_pair(moves, inv)
    if _use_numba(backend):
        return _components_nb(table, inv, n, mask, moves)
    return _components_np(table, inv, n, mask, moves)


def bfs_tree(table, inv, n: int, moves, source: int, target: int, backend: str | None = None):
    """BFS parents/move ids from ``source`` until ``target`` is reached (or the component is exhausted)."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    moves = np.ascontiguousarray(moves, dtype=np.int64).reshape(-1, 4)
    if _use_numba(backend):
        return _bfs_nb(table, inv, n, moves, int(source), int(target))
    return _bfs_np(table, inv, n, moves, int(source), int(target))
