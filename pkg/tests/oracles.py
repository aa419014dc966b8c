"""Deliberately naive reference implementations used as test oracles."""

from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations

import numpy as np
from scipy.stats import rankdata


def all_subsets(items):
    items = sorted(items, key=str)
    return chain.from_iterable(combinations(items, k) for k in range(1, len(items) + 1))


def brute_force_itemsets(transactions: list[frozenset], min_support: Fraction) -> dict[frozenset, Fraction]:
    universe = set().union(*transactions) if transactions else set()
    out = {}
    for subset in all_subsets(universe):
        s = frozenset(subset)
        sup = Fraction(sum(1 for t in transactions if s <= t), len(transactions))
        if sup >= min_support:
            out[s] = sup
    return out


def brute_force_delta(a, b) -> float:
    gt = lt = 0
    for x in a:
        for y in b:
            if x > y:
                gt += 1
            elif x < y:
                lt += 1
    return (gt - lt) / (len(a) * len(b))


def enumerated_mann_whitney(a, b, alternative="two-sided") -> float:
    """p-value by listing every assignment of pooled ranks to sample a."""
    pooled = list(a) + list(b)
    ranks = rankdata(pooled)
    n = len(a)
    observed = sum(ranks[:n])
    sums = [sum(ranks[i] for i in idx) for idx in combinations(range(len(pooled)), n)]
    total = len(sums)
    eps = 1e-9
    upper = Fraction(sum(1 for s in sums if s >= observed - eps), total)
    lower = Fraction(sum(1 for s in sums if s <= observed + eps), total)
    if alternative == "greater":
        return float(upper)
    if alternative == "less":
        return float(lower)
    return float(min(Fraction(1), 2 * min(upper, lower)))


def numpy_quartiles(sample):
    return tuple(float(np.percentile(sample, q)) for q in (25, 50, 75))
