#!/usr/bin/env python3
"""Benchmark the compiled LCS kernel against the pure-Python fallback.

The LCS dynamic program is the hot inner loop of pair scoring (eight field
comparisons per candidate pair), so this is the number that decides whether
scoring a detector dump takes seconds or minutes.

Usage: python benchmarks/bench_lcs.py [--pairs N]
"""

import argparse
import random
import time

from remap import _lcs_py

try:
    from remap import _lcs_c
except ImportError:
    _lcs_c = None

VOCAB = (
    "get set with name stmt unit body class method value box type list "
    "string builder index count local trap graph pred succ phase option "
    "validate load resolve escape replace append iterator next"
).split()


def workload(n_pairs: int, seed: int = 7):
    rng = random.Random(seed)
    pairs = []
    for _ in range(n_pairs):
        # mix of short identifier sequences and long doc/comment sequences
        if rng.random() < 0.7:
            n, m = rng.randint(1, 8), rng.randint(1, 8)
        else:
            n, m = rng.randint(20, 120), rng.randint(20, 120)
        pairs.append(
            ([rng.choice(VOCAB) for _ in range(n)], [rng.choice(VOCAB) for _ in range(m)])
        )
    return pairs


def bench(fn, pairs, repeats: int = 3):
    best = float("inf")
    checksum = 0
    for _ in range(repeats):
        start = time.perf_counter()
        checksum = 0
        for s1, s2 in pairs:
            checksum += fn(s1, s2)
        best = min(best, time.perf_counter() - start)
    return best, checksum


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20000)
    args = parser.parse_args()

    pairs = workload(args.pairs)
    py_time, py_sum = bench(_lcs_py.lcs_length, pairs)
    rate = args.pairs / py_time
    print(f"pure python : {py_time:8.3f} s   {rate:12.0f} pairs/s")
    if _lcs_c is None:
        print("compiled    : extension not built (pip install -e . rebuilds it)")
        return
    c_time, c_sum = bench(_lcs_c.lcs_length, pairs)
    assert c_sum == py_sum, "backends disagree"
    rate = args.pairs / c_time
    print(f"compiled    : {c_time:8.3f} s   {rate:12.0f} pairs/s")
    print(f"speedup     : {py_time / c_time:8.1f}x   (identical results on {args.pairs} pairs)")


if __name__ == "__main__":
    main()
