"""Integer apportionment of a kit budget over a priority ranking.

Fractional shares are carried as exact :class:`~fractions.Fraction` values
and integerized with the largest-remainder (Hamilton) method, so every
plan conserves the budget, stays within one kit of its ideal share, and is
bit-identical across platforms.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Sequence

from .errors import DataQualityWarning, DomainValidationError
from .model import AllocationEntry, AllocationPlan, PriorityRanking, Strategy

DEFAULT_TOP_K = 3


def largest_remainder(ideals: Sequence[Fraction], total: int) -> list[int]:
    """Integerize exact shares summing to ``total``.

    Each entry receives the floor of its share; leftover units go to the
    largest fractional remainders, earlier entries first on ties.
    """
    if sum(ideals) != total:
        raise DomainValidationError("ideal shares must sum to the total")
    base = [int(q) for q in ideals]
    leftover = total - sum(base)
    by_remainder = sorted(range(len(ideals)), key=lambda i: (base[i] - ideals[i], i))
    for i in by_remainder[:leftover]:
        base[i] += 1
    return base


def allocate(
    ranking: PriorityRanking,
    total_kits: int,
    strategy: Strategy | str = Strategy.PROPORTIONAL,
    *,
    k: int = DEFAULT_TOP_K,
    floor: int = 0,
) -> AllocationPlan:
    """Apportion ``total_kits`` across the ranking under a strategy.

    ``floor`` guarantees every ranked neighborhood that many kits before
    the strategy divides the remainder; ``k`` only applies to
    ``top_k_equal``.
    """
    strategy = Strategy(strategy)
    if total_kits < 1:
        raise DomainValidationError(f"total_kits must be >= 1, got {total_kits}")
    if floor < 0:
        raise DomainValidationError(f"floor must be non-negative, got {floor}")
    n = len(ranking.entries)
    if floor * n > total_kits:
        raise DomainValidationError(
            f"floor of {floor} kits across {n} neighborhoods exceeds budget {total_kits}"
        )
    remaining = total_kits - floor * n

    if strategy is Strategy.PROPORTIONAL:
        shares = _proportional_shares(ranking, remaining)
        kits = largest_remainder(shares, remaining)
    elif strategy is Strategy.RANK_WEIGHTED:
        weights = [Fraction(1, position) for position in range(1, n + 1)]
        shares = _from_weights(weights, remaining)
        kits = largest_remainder(shares, remaining)
    else:
        kits = _top_k_equal(n, remaining, k)

    allocations = tuple(
        AllocationEntry(entry.name, floor + kit)
        for entry, kit in zip(ranking.entries, kits)
    )
    apportionment = "even_split" if strategy is Strategy.TOP_K_EQUAL else "largest_remainder"
    return AllocationPlan(
        city=ranking.city,
        total_kits=total_kits,
        allocations=allocations,
        strategy=strategy,
        apportionment=apportionment,
    )


def _proportional_shares(ranking: PriorityRanking, remaining: int) -> list[Fraction]:
    scores = [Fraction(entry.raw_score) for entry in ranking.entries]
    if max(scores) <= 0:
        raise DomainValidationError(
            f"{ranking.city}: proportional allocation needs a positive raw score"
        )
    return _from_weights(scores, remaining)


def _from_weights(weights: list[Fraction], remaining: int) -> list[Fraction]:
    total_weight = sum(weights)
    return [remaining * w / total_weight for w in weights]


def _top_k_equal(n: int, remaining: int, k: int) -> list[int]:
    if k < 1:
        raise DomainValidationError(f"k must be >= 1, got {k}")
    if k > n:
        warnings.warn(
            f"k={k} exceeds the {n} ranked neighborhoods; truncated to {n}",
            DataQualityWarning,
            stacklevel=3,
        )
        k = n
    base, extra = divmod(remaining, k)
    return [base + 1 if i < extra else base if i < k else 0 for i in range(n)]
