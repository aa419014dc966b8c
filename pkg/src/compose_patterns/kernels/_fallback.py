"""Pure-Python implementations of the numeric kernels.

These are the reference versions; the compiled module must agree with them
exactly on every input.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Sequence


def dominance_counts(a: Sequence[float], b: Sequence[float]) -> tuple[int, int]:
    """Return ``(#{x > y}, #{x < y})`` over all pairs ``x in a, y in b``."""
    ys = sorted(b)
    m = len(ys)
    greater = 0
    less = 0
    for x in a:
        greater += bisect_left(ys, x)
        less += m - bisect_right(ys, x)
    return greater, less


def support_counts(transactions: Sequence[int], candidates: Sequence[int]) -> list[int]:
    """Count, for each candidate bitmask, the transactions containing it."""
    out = []
    for cand in candidates:
        n = 0
        for t in transactions:
            if t & cand == cand:
                n += 1
        out.append(n)
    return out


def subset_sum_counts(weights: Sequence[int], k: int) -> list[int]:
    """Number of ``k``-element subsets of ``weights`` reaching each total.

    ``result[s]`` is the count of index subsets of size ``k`` whose weights
    sum to ``s``. Weights must be non-negative integers.
    """
    total = sum(weights)
    # table[j][s]: subsets of size j with sum s among the items seen so far
    table = [[0] * (total + 1) for _ in range(k + 1)]
    table[0][0] = 1
    seen = 0
    for w in weights:
        seen += w
        for j in range(min(k, len(weights)), 0, -1):
            prev = table[j - 1]
            row = table[j]
            for s in range(seen, w - 1, -1):
                c = prev[s - w]
                if c:
                    row[s] += c
    return table[k]
