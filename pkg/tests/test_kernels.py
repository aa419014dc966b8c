import random
from itertools import combinations

import pytest

from compose_patterns import kernels
from compose_patterns.kernels import _fallback


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_dominance_counts(kernel_backend):
    rng = random.Random(0)
    for _ in range(50):
        a = [rng.randint(0, 5) for _ in range(rng.randint(0, 15))]
        b = [rng.randint(0, 5) for _ in range(rng.randint(0, 15))]
        gt = sum(x > y for x in a for y in b)
        lt = sum(x < y for x in a for y in b)
        assert kernels.dominance_counts(a, b) == (gt, lt)


def test_support_counts(kernel_backend):
    rng = random.Random(1)
    masks = [rng.getrandbits(10) for _ in range(40)]
    cands = [rng.getrandbits(10) for _ in range(30)] + [0]
    expected = [sum(1 for m in masks if m & c == c) for c in cands]
    assert kernels.support_counts(masks, cands) == expected


def test_support_counts_wide_masks_fall_back():
    masks = [(1 << 70) | 1, 1]
    assert kernels.support_counts(masks, [1 << 70, 1]) == [1, 2]


def test_subset_sum_counts(kernel_backend):
    weights = [2, 3, 3, 5, 8]
    for k in range(0, 6):
        table = kernels.subset_sum_counts(weights, k)
        expected = [0] * len(table)
        for combo in combinations(weights, k):
            expected[sum(combo)] += 1
        assert table == expected


@pytest.mark.skipif(kernels._compiled is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = random.Random(9)
    a = [rng.random() for _ in range(200)]
    b = [rng.random() for _ in range(300)]
    assert kernels._compiled.dominance_counts(a, b) == _fallback.dominance_counts(a, b)
    w = [rng.randint(2, 60) for _ in range(30)]
    assert kernels._compiled.subset_sum_counts(w, 12) == _fallback.subset_sum_counts(w, 12)
