"""Priority-score weight derivation and per-city neighborhood ranking.

The method fixes the prevalence weight alpha and derives the coverage
weight gamma from the correlation between public coverage and prevalence.
Two gamma rules are in circulation for this derivation, so both are
implemented as explicit variants:

* ``text``:      gamma = clamp(r, 0, 1) * (1 - alpha)
* ``algorithm``: gamma = clamp(r, 0, 1)

with beta = (1 - alpha) * (1 - gamma) in both cases. Neither rule makes
the weights sum to 1; ``normalize_weights`` rescales them when a unit sum
is wanted (ranking order is unaffected either way).
"""

from __future__ import annotations

import warnings

from .errors import DataQualityWarning, DomainValidationError
from .model import (
    CityDataset,
    PriorityRanking,
    RankingEntry,
    WeightConfig,
    WeightVariant,
)
from .stats import min_max_normalize, pearson

DEFAULT_ALPHA = 0.5


def derive_weights(
    r: float,
    alpha: float = DEFAULT_ALPHA,
    variant: WeightVariant | str = WeightVariant.TEXT,
    *,
    normalize: bool = False,
) -> WeightConfig:
    """Derive (beta, gamma) from the coverage-prevalence correlation ``r``.

    Negative correlations are clamped to zero (with a warning) instead of
    producing a negative coverage weight, which would invert the metric's
    intent.
    """
    variant = WeightVariant(variant)
    if not 0 < alpha < 1:
        raise DomainValidationError(f"alpha must be in the open interval (0, 1), got {alpha}")
    if not -1 <= r <= 1:
        raise DomainValidationError(f"correlation must lie in [-1, 1], got {r}")
    r_clamped = r
    if r < 0:
        warnings.warn(
            f"negative correlation {r} clamped to 0 for weight derivation",
            DataQualityWarning,
            stacklevel=2,
        )
        r_clamped = 0.0
    if variant is WeightVariant.TEXT:
        gamma = r_clamped * (1 - alpha)
    else:
        gamma = r_clamped
    beta = (1 - alpha) * (1 - gamma)
    if normalize:
        total = alpha + beta + gamma
        return WeightConfig(
            alpha=alpha / total,
            beta=beta / total,
            gamma=gamma / total,
            variant=variant,
            source_correlation=r,
            normalized=True,
        )
    return WeightConfig(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        variant=variant,
        source_correlation=r,
    )


def score_city(
    dataset: CityDataset,
    alpha: float = DEFAULT_ALPHA,
    variant: WeightVariant | str = WeightVariant.TEXT,
    r_override: float | None = None,
    *,
    normalize_weights: bool = False,
) -> PriorityRanking:
    """Rank a city's neighborhoods by priority score.

    Prevalence, untested percentage, and coverage percentage are min-max
    normalized within the city, combined linearly with the derived
    weights, sorted descending (ties broken by canonical name), and
    rescaled so the top raw score maps to exactly 10.0.
    """
    if len(dataset) < 2:
        raise DomainValidationError(
            f"{dataset.city}: scoring needs at least 2 records, got {len(dataset)}"
        )
    prevalence = [record.prevalence for record in dataset.records]
    untested = [record.untested_pct for record in dataset.records]
    coverage = [record.public_coverage_pct for record in dataset.records]

    r = r_override if r_override is not None else pearson(coverage, prevalence)
    weights = derive_weights(r, alpha, variant, normalize=normalize_weights)

    p_norm = min_max_normalize(prevalence)
    u_norm = min_max_normalize(untested)
    h_norm = min_max_normalize(coverage)
    raw = [
        weights.alpha * p + weights.beta * u + weights.gamma * h
        for p, u, h in zip(p_norm, u_norm, h_norm)
    ]

    order = sorted(range(len(raw)), key=lambda i: (-raw[i], dataset.records[i].name))
    max_raw = raw[order[0]]
    if max_raw > 0:
        entries = [
            RankingEntry(dataset.records[i].name, raw[i], 10.0 * (raw[i] / max_raw))
            for i in order
        ]
    else:
        warnings.warn(
            f"{dataset.city}: all raw priority scores are zero; scaled scores set to 0",
            DataQualityWarning,
            stacklevel=2,
        )
        entries = [RankingEntry(dataset.records[i].name, 0.0, 0.0) for i in order]
    return PriorityRanking(city=dataset.city, weights=weights, entries=tuple(entries))


def top_k(ranking: PriorityRanking, k: int) -> list[str]:
    """First ``min(k, len)`` neighborhood names in ranking order."""
    if k < 1:
        raise DomainValidationError(f"k must be >= 1, got {k}")
    return [entry.name for entry in ranking.entries[:k]]
