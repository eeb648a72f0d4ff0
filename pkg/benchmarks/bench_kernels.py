"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --n 20000 --repeat 3
"""

import argparse
import time

import numpy as np

from deltaidx import kernels


def cases(n, rng):
    text = rng.integers(0, 4, n).astype(np.int64)
    act = (rng.random(n) < 0.9).astype(np.uint8)
    rank = rng.integers(0, n, n).astype(np.int64)
    sa = kernels.backend_module("python").suffix_array(text)
    lcp = kernels.backend_module("python").lcp_array(text, sa)
    return {
        "rle_boundaries": lambda m: m.rle_boundaries(text, act),
        "bc_boundaries": lambda m: m.bc_boundaries(text, act, rank),
        "suffix_array": lambda m: m.suffix_array(text),
        "lcp_array": lambda m: m.lcp_array(text, sa),
        "distinct_counts": lambda m: m.distinct_counts(sa, lcp),
        "failure_function": lambda m: m.failure_function(text),
    }


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    py = kernels.backend_module("python")
    try:
        cy = kernels.backend_module("cython")
    except ImportError:
        cy = None
        print("compiled kernels unavailable; timing the fallback only")

    print(f"{'kernel':<18}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, call in cases(args.n, np.random.default_rng(args.seed)).items():
        tp = best_of(lambda: call(py), args.repeat)
        if cy is None:
            print(f"{name:<18}{tp * 1e3:>12.2f}{'-':>12}{'-':>10}")
            continue
        if not np.array_equal(call(py), call(cy)):
            raise SystemExit(f"{name}: backends disagree")
        tc = best_of(lambda: call(cy), args.repeat)
        print(f"{name:<18}{tp * 1e3:>12.2f}{tc * 1e3:>12.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
