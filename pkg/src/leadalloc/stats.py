"""Correlation and normalization primitives.

All functions are pure. Sums use ``math.fsum`` after centering (two-pass),
which keeps results stable for the modest column lengths seen here.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple, Sequence

from .errors import DataQualityWarning, DomainValidationError, UndefinedCorrelationError
from .model import CityDataset, COL_PREVALENCE


class CorrelationResult(NamedTuple):
    factor: str
    r: float
    n: int


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equal-length sequences.

    Raises :class:`UndefinedCorrelationError` when fewer than two points
    are given or either input has zero variance; never returns a default.
    """
    if len(x) != len(y):
        raise DomainValidationError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise UndefinedCorrelationError(f"need at least 2 points, got {n}")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    sxx = math.fsum((xi - mean_x) ** 2 for xi in x)
    syy = math.fsum((yi - mean_y) ** 2 for yi in y)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance makes correlation undefined")
    sxy = math.fsum((xi - mean_x) * (yi - mean_y) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation (Pearson on average-tied ranks).

    Diagnostic alternative to :func:`pearson`; not used by scoring.
    """
    return pearson(_average_ranks(x), _average_ranks(y))


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


_ESTIMATORS = {"pearson": pearson, "spearman": spearman}


def correlate_factors(
    dataset: CityDataset,
    factors: Sequence[str],
    *,
    estimator: str = "pearson",
) -> list[CorrelationResult]:
    """Correlate each named factor with lead prevalence.

    Each factor is computed over the rows where both the factor and
    prevalence are present, so sparsely populated extra columns are
    handled without imputation.
    """
    try:
        corr = _ESTIMATORS[estimator]
    except KeyError:
        raise DomainValidationError(
            f"unknown estimator {estimator!r}; choose from {sorted(_ESTIMATORS)}"
        ) from None
    known = set(dataset.factor_names())
    results = []
    for factor in factors:
        if factor == COL_PREVALENCE:
            raise DomainValidationError("cannot correlate prevalence with itself by name")
        if factor not in known:
            raise DomainValidationError(
                f"unknown factor {factor!r}; available: {', '.join(dataset.factor_names())}"
            )
        pairs = [
            (value, record.prevalence)
            for record in dataset.records
            if (value := record.metric(factor)) is not None
        ]
        if len(pairs) < 2:
            raise UndefinedCorrelationError(
                f"factor {factor!r} overlaps prevalence on only {len(pairs)} row(s)"
            )
        xs, ys = zip(*pairs)
        results.append(CorrelationResult(factor, corr(xs, ys), len(pairs)))
    return results


def min_max_normalize(values: Sequence[float]) -> list[float]:
    """Affinely map values onto [0, 1]; a constant column maps to all zeros.

    The degenerate constant-column case carries a :class:`DataQualityWarning`
    because it silently removes that column's influence from any score
    built on the result.
    """
    if not values:
        raise DomainValidationError("cannot normalize an empty sequence")
    lo = min(values)
    hi = max(values)
    if lo == hi:
        warnings.warn(
            f"degenerate column: all {len(values)} values equal {lo}; normalized to 0",
            DataQualityWarning,
            stacklevel=2,
        )
        return [0.0] * len(values)
    span = hi - lo
    return [(v - lo) / span for v in values]
