"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each case builds the membership mask, the component partition and one BFS
path, checks both backends return identical arrays, and prints a table.
"""
import argparse
import time

import numpy as np

from acnielsen import kernels
from acnielsen._accel import HAVE_NUMBA
from acnielsen.explorer import move_table
from acnielsen.groups.library import abelian_table, dihedral, heisenberg_table, quaternion


def cases(quick):
    out = [
        ("Q8 n=3 nielsen", quaternion(), 3, False),
        ("D4 n=3 ac", dihedral(4), 3, True),
        ("Heis5 n=2 ac", heisenberg_table(5), 2, True),
    ]
    if not quick:
        out += [
            ("Z5xZ20 n=3 nielsen", abelian_table([5, 20]), 3, False),
            ("Heis3 n=3 nielsen", heisenberg_table(3), 3, False),
        ]
    return out


def best_of(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return min(times), result


def run_case(g, n, normal, backend, repeat):
    conj = tuple(a for a in g.generating_set if a != g.e) if normal else ()
    moves = move_table(n, conj, g.inverse)
    gens = g.generating_set if normal else None
    t_mask, mask = best_of(lambda: kernels.membership_mask(g.table, g.inverse, n, gens, normal, backend), repeat)
    t_comp, rep = best_of(lambda: kernels.component_minima(g.table, g.inverse, n, mask, moves, backend), repeat)
    verts = np.flatnonzero(mask)
    src, dst = int(verts[0]), int(verts[-1])
    t_bfs, tree = best_of(lambda: kernels.bfs_tree(g.table, g.inverse, n, moves, src, dst, backend), repeat)
    return (t_mask, t_comp, t_bfs), (mask, rep, tree[0][dst] >= 0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the 10^6-tuple cases")
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if HAVE_NUMBA:
        # compile outside the timed region
        g = quaternion()
        run_case(g, 2, True, "numba", 1)
    print(f"{'case':22} {'backend':8} {'tuples':>9} {'mask s':>8} {'comps s':>8} {'bfs s':>8} {'vertices':>9} {'comps':>6}")
    for name, g, n, normal in cases(args.quick):
        results = {}
        for b in backends:
            times, res = run_case(g, n, normal, b, args.repeat)
            results[b] = res
            mask, rep, _ = res
            ncomp = len(np.unique(rep[rep >= 0]))
            print(f"{name:22} {b:8} {g.n ** n:9d} {times[0]:8.3f} {times[1]:8.3f} {times[2]:8.3f} {int(mask.sum()):9d} {ncomp:6d}")
        if len(results) == 2:
            a, b = results["numpy"], results["numba"]
            same = np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]
            print(f"{'':22} backends agree: {same}")


if __name__ == "__main__":
    main()
