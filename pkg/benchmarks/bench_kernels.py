"""Time the compiled and pure-Python kernels on the same (d, p) block.

    python benchmarks/bench_kernels.py --m 1000
"""

import argparse
import time

import numpy as np

from unitindex import _pykernels
from unitindex.arith import build_tables, valid_ds
from unitindex.pell import FieldParams, cf_expand

try:
    from unitindex import _core
except ImportError:
    _core = None


def run(kern, work, primes, spf, m):
    counts = np.zeros((4, m + 2), dtype=np.int64)
    t0 = time.perf_counter()
    pairs = sum(kern.sweep_d(d, quot, norm, primes, spf, counts) for d, quot, norm in work)
    return time.perf_counter() - t0, pairs, counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=1000, help="d and p range")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    tables = build_tables(args.m + 1)
    primes = tables.primes(3, args.m)
    work = []
    for d in valid_ds(2, args.m):
        cf = cf_expand(FieldParams(d))
        work.append((d, np.asarray(cf.partial_quotients, dtype=np.int64), cf.norm_sign))

    backends = [("python", _pykernels)] + ([("cython", _core)] if _core else [])
    results = {}
    for name, kern in backends:
        best = min(run(kern, work, primes, tables.spf, args.m)[0] for _ in range(args.repeat))
        _, pairs, counts = run(kern, work, primes, tables.spf, args.m)
        results[name] = (best, pairs, counts)
        print(f"{name:>7}: {best:8.3f} s  {pairs} pairs  {1e6 * best / pairs:8.3f} us/pair")

    if len(results) == 2:
        (tp, _, cp), (tc, _, cc) = results["python"], results["cython"]
        assert np.array_equal(cp, cc), "backends disagree"
        print(f"speedup: {tp / tc:.1f}x (histograms identical)")
    else:
        print("compiled extension not available; only the fallback was timed")


if __name__ == "__main__":
    main()
