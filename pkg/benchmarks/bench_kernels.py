"""Time the compiled kernels against the numpy/pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends are called directly on identical inputs, and their results are
compared before the timings are reported.
"""
import argparse
import time

import numpy as np

from ttpk import _pykernels
from ttpk.construction import label_moves
from ttpk.instance import generate
from ttpk.oracle import _tables

try:
    from ttpk import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    m30 = generate("euclidean-random", 30, seed=0)
    red = np.arange(1, 30, dtype=np.int64)
    src, dst = label_moves(30, 4, 2)
    yield "rotation_costs n=30 k=4", lambda impl: impl.rotation_costs(m30.scaled, red, 0, src, dst)

    m16 = generate("euclidean-random", 16, seed=0)
    yield "held_karp n=16", lambda impl: impl.held_karp(m16.scaled)

    m6 = generate("unit", 6, seed=1)
    F, G = _tables(m6, 5)
    yield "ttp_search unit n=6 k=5", lambda impl: impl.ttp_search(
        m6.scaled, 5, F, G, _pykernels.NO_INCUMBENT, time.monotonic() + 600)


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return [list(map(tuple, d)) for d in a] == [list(map(tuple, d)) for d in b] \
            if a and isinstance(a[0], list) else list(a) == list(b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'kernel':<28}{'cython s':>12}{'python s':>12}{'speedup':>10}  agree")
    for name, call in cases():
        tc, out_c = best_of(lambda: call(_ckernels), args.repeat)
        tp, out_p = best_of(lambda: call(_pykernels), 1 if "search" in name else args.repeat)
        print(f"{name:<28}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x  {same(out_c, out_p)}")


if __name__ == "__main__":
    main()
