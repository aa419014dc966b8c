"""Rank-based two-sample comparison: Mann-Whitney U, Cliff's delta, quartiles."""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import EmptySample
from .kernels import dominance_counts, subset_sum_counts

ALTERNATIVES = ("two-sided", "greater", "less")
EXACT = "ExactEnumeration"
NORMAL = "NormalApproxTieCorrected"
# largest number of rank splits enumerated exactly
EXACT_SPLIT_LIMIT = 200_000

# |delta| thresholds: negligible < 0.147 <= small < 0.33 <= medium < 0.474 <= large
MAGNITUDE_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


@dataclass(frozen=True)
class StatsResult:
    u_statistic: float
    p_value: float
    method: str
    alternative: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EffectSize:
    delta: float
    magnitude: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Summary:
    n: int
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def to_dict(self) -> dict:
        return asdict(self)


def _require(sample: Sequence[float], label: str) -> list[float]:
    values = list(sample)
    if not values:
        raise EmptySample(f"sample {label} is empty")
    for v in values:
        if isinstance(v, float) and math.isnan(v):
            raise ValueError(f"sample {label} contains NaN")
    return values


def magnitude(delta: float) -> str:
    size = abs(delta)
    for bound, label in MAGNITUDE_THRESHOLDS:
        if size < bound:
            return label
    return "large"


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> EffectSize:
    xs, ys = _require(a, "a"), _require(b, "b")
    gt, lt = dominance_counts(xs, ys)
    delta = (gt - lt) / (len(xs) * len(ys))
    return EffectSize(delta, magnitude(delta))


def doubled_midranks(values: Sequence[float]) -> list[int]:
    """Twice the average rank of each value, so tied ranks stay integral."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) share ranks i+1..j+1
        doubled = i + j + 2
        for k in range(i, j + 1):
            ranks[order[k]] = doubled
        i = j + 1
    return ranks


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2))


def _exact_p(weights: list[int], n: int, observed: int, alternative: str) -> float:
    counts = subset_sum_counts(weights, n)
    total = comb(len(weights), n)
    upper = sum(counts[observed:])
    lower = sum(counts[: observed + 1])
    if alternative == "greater":
        p = Fraction(upper, total)
    elif alternative == "less":
        p = Fraction(lower, total)
    else:
        p = min(Fraction(1), 2 * Fraction(min(upper, lower), total))
    return float(p)


def _normal_p(u: float, n: int, m: int, values: Sequence[float], alternative: str) -> float:
    size = n + m
    mean = n * m / 2
    ties = sum(t**3 - t for t in Counter(values).values())
    variance = n * m / 12 * ((size + 1) - ties / (size * (size - 1))) if size > 1 else 0.0
    if variance <= 0:
        return 1.0
    sd = math.sqrt(variance)
    if alternative == "greater":
        p = _normal_sf((u - mean - 0.5) / sd)
    elif alternative == "less":
        p = 1 - _normal_sf((u - mean + 0.5) / sd)
    else:
        z = (abs(u - mean) - 0.5) / sd
        p = 2 * _normal_sf(max(z, 0.0))
    return min(1.0, max(0.0, p))


def mann_whitney_u(
    a: Sequence[float],
    b: Sequence[float],
    alternative: str = "two-sided",
    method: str = "auto",
) -> StatsResult:
    """U statistic of ``a`` with a p-value for the chosen alternative.

    ``greater`` tests whether ``a`` tends to exceed ``b``. With
    ``method="auto"`` the null distribution is enumerated exactly when there
    are at most 200,000 ways to split the pooled ranks, otherwise the normal
    approximation with tie and continuity corrections is used.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    if method not in ("auto", "exact", "asymptotic"):
        raise ValueError("method must be 'auto', 'exact' or 'asymptotic'")
    xs, ys = _require(a, "a"), _require(b, "b")
    n, m = len(xs), len(ys)
    pooled = xs + ys
    ranks = doubled_midranks(pooled)
    rank_sum2 = sum(ranks[:n])
    u = rank_sum2 / 2 - n * (n + 1) / 2
    exact = method == "exact" or (method == "auto" and comb(n + m, n) <= EXACT_SPLIT_LIMIT)
    if exact:
        return StatsResult(u, _exact_p(ranks, n, rank_sum2, alternative), EXACT, alternative)
    return StatsResult(u, _normal_p(u, n, m, pooled, alternative), NORMAL, alternative)


def summarize(sample: Sequence[float]) -> Summary:
    """Five-number summary; quartiles interpolate linearly between order statistics."""
    values = sorted(_require(sample, "sample"))
    if len(values) == 1:
        v = values[0]
        return Summary(1, v, v, v, v, v)
    q1, median, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return Summary(len(values), values[0], q1, median, q3, values[-1])


def read_sample(path: str) -> list[float]:
    """Numbers from a newline-delimited file; blank lines and ``#`` comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                out.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
    return out
