"""Numeric kernels with a compiled fast path.

The Cython extension ``_speedups`` is used when it was built at install time;
otherwise the pure-Python module ``_fallback`` is used. Setting the
environment variable ``COMPOSE_PATTERNS_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os
from math import comb
from typing import Sequence

from . import _fallback

try:
    if os.environ.get("COMPOSE_PATTERNS_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _speedups as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# int64 limit for the compiled subset-sum table
_MAX_COMPILED_COUNT = 2**62
# uint64 bitmasks in the compiled support counter
_MAX_COMPILED_BITS = 64


def dominance_counts(a: Sequence[float], b: Sequence[float]) -> tuple[int, int]:
    if _compiled is not None:
        return _compiled.dominance_counts(list(a), list(b))
    return _fallback.dominance_counts(a, b)


def support_counts(transactions: Sequence[int], candidates: Sequence[int]) -> list[int]:
    if _compiled is not None and max([0, *transactions, *candidates]).bit_length() <= _MAX_COMPILED_BITS:
        return _compiled.support_counts(list(transactions), list(candidates))
    return _fallback.support_counts(transactions, candidates)


def subset_sum_counts(weights: Sequence[int], k: int) -> list[int]:
    if _compiled is not None and comb(len(weights), k) < _MAX_COMPILED_COUNT:
        return _compiled.subset_sum_counts(list(weights), k)
    return _fallback.subset_sum_counts(weights, k)


__all__ = ["BACKEND", "dominance_counts", "support_counts", "subset_sum_counts"]
