"""Level-wise (Apriori) mining of service types that co-occur within files."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .classifier import ClassifiedService
from .errors import EmptyCorpus, InvalidSupport
from .kernels import support_counts
from .taxonomy import ServiceType

DEFAULT_MIN_SUPPORT = Fraction(1, 20)
SUPPORT_PLACES = 6


@dataclass(frozen=True)
class Transaction:
    file: str
    items: frozenset[ServiceType]


@dataclass(frozen=True)
class ItemsetResult:
    items: frozenset[ServiceType]
    support: Fraction
    count: int

    @property
    def sorted_items(self) -> list[ServiceType]:
        return sorted(self.items, key=lambda t: t.value)

    @property
    def support_text(self) -> str:
        return format_support(self.support)

    def to_dict(self) -> dict:
        return {"items": [t.value for t in self.sorted_items], "support": self.support_text, "count": self.count}

    @classmethod
    def from_dict(cls, data: dict, total: int) -> ItemsetResult:
        items = frozenset(ServiceType(v) for v in data["items"])
        return cls(items, Fraction(data["count"], total), data["count"])


def format_support(value: Fraction | float) -> str:
    """Six decimal places, rounding halves away from zero."""
    exact = Decimal(value.numerator) / Decimal(value.denominator) if isinstance(value, Fraction) else Decimal(value)
    return str(exact.quantize(Decimal(1).scaleb(-SUPPORT_PLACES), rounding=ROUND_HALF_UP))


def as_fraction(value: Fraction | float | int | str) -> Fraction:
    """Exact fraction for a support threshold.

    Floats go through their shortest decimal repr, so ``0.05`` means 1/20
    rather than the binary value just above it.
    """
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def _check_support(min_support: Fraction | float) -> Fraction:
    threshold = as_fraction(min_support)
    if not 0 < threshold <= 1:
        raise InvalidSupport(f"min_support must be in (0, 1], got {min_support}")
    return threshold


def transactions_from(
    files: Iterable[tuple[str, Sequence[ClassifiedService]]], include_unclassified: bool = False
) -> list[Transaction]:
    """One transaction per file holding the distinct types of its services."""
    out = []
    for path, classified in files:
        items = {c.service_type for c in classified}
        if not include_unclassified:
            items.discard(ServiceType.UNCLASSIFIED)
        out.append(Transaction(path, frozenset(items)))
    return out


def support(items: Iterable[ServiceType], transactions: Sequence[Transaction]) -> Fraction:
    if not transactions:
        raise EmptyCorpus("support is undefined on an empty corpus")
    wanted = frozenset(items)
    hits = sum(1 for t in transactions if wanted <= t.items)
    return Fraction(hits, len(transactions))


def _result_key(result: ItemsetResult) -> tuple:
    return (result.support, [t.value for t in result.sorted_items])


def mine_frequent_itemsets(
    transactions: Sequence[Transaction], min_support: Fraction | float = DEFAULT_MIN_SUPPORT
) -> list[ItemsetResult]:
    """All itemsets whose support reaches ``min_support``.

    Results are ordered by ascending support, then by item names.
    """
    threshold = _check_support(min_support)
    if not transactions:
        raise EmptyCorpus("cannot mine an empty corpus")
    total = len(transactions)
    universe = sorted({item for t in transactions for item in t.items}, key=lambda t: t.value)
    bit = {item: 1 << i for i, item in enumerate(universe)}
    masks = [sum(bit[i] for i in t.items) for t in transactions]
    min_count = threshold * total

    results: list[ItemsetResult] = []
    # itemsets are tuples of bit positions in increasing order
    level = [(i,) for i in range(len(universe))]
    while level:
        counts = support_counts(masks, [sum(1 << i for i in c) for c in level])
        frequent = [c for c, n in zip(level, counts) if n >= min_count]
        for cand, n in zip(level, counts):
            if n >= min_count:
                items = frozenset(universe[i] for i in cand)
                results.append(ItemsetResult(items, Fraction(n, total), n))
        level = _next_level(frequent)
    results.sort(key=_result_key)
    return results


def _next_level(frequent: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    known = set(frequent)
    out = []
    for i, a in enumerate(frequent):
        for b in frequent[i + 1 :]:
            if a[:-1] != b[:-1]:
                continue
            cand = a + (b[-1],) if a[-1] < b[-1] else b + (a[-1],)
            # downward closure: every (k-1)-subset must be frequent
            if all(cand[:j] + cand[j + 1 :] in known for j in range(len(cand))):
                out.append(cand)
    return sorted(set(out))
