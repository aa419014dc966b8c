"""Compare the compiled and pure-Python kernels on representative inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from compose_patterns.kernels import _compiled, _fallback


def cases(rng: random.Random):
    a = [rng.random() for _ in range(2_000)]
    b = [rng.random() for _ in range(3_000)]
    masks = [rng.getrandbits(34) for _ in range(5_000)]
    candidates = [rng.getrandbits(34) & rng.getrandbits(34) & rng.getrandbits(34) for _ in range(500)]
    weights = [rng.randint(2, 60) for _ in range(30)]
    return [
        ("dominance_counts 2000x3000", "dominance_counts", (a, b)),
        ("support_counts 5000 tx x 500 sets", "support_counts", (masks, candidates)),
        ("subset_sum_counts n=30 k=15", "subset_sum_counts", (weights, 15)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _compiled is None:
        raise SystemExit("compiled kernels are not built; reinstall with Cython available")

    print(f"{'kernel':<36} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, name, call_args in cases(random.Random(0)):
        slow, fast = getattr(_fallback, name), getattr(_compiled, name)
        assert slow(*call_args) == fast(*call_args), name
        t_py = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        print(f"{label:<36} {t_py * 1e3:>10.2f} {t_cy * 1e3:>10.2f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
