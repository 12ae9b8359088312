"""Top-k overlap accuracy of recorded allocation recommendations.

A model run scores one hit for every target neighborhood that appears
anywhere in its top-k recommendations for that city, regardless of order.
Accuracies are exact fractions; display strings are truncated (not
rounded) to two decimals, so 6/9 renders as ``0.66``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import AbstractSet, Mapping, NamedTuple, Sequence

from .errors import DomainValidationError
from .model import ModelRun, TargetSet

DEFAULT_K = 3


def truncate_display(value: Fraction | int, places: int = 2) -> str:
    """Format a non-negative rational truncated toward zero."""
    value = Fraction(value)
    if value < 0:
        raise DomainValidationError(f"display truncation expects a non-negative value, got {value}")
    scale = 10**places
    units = value.numerator * scale // value.denominator
    return f"{units // scale}.{units % scale:0{places}d}"


def city_hits(recommended: Sequence[str], targets: AbstractSet[str], k: int = DEFAULT_K) -> int:
    """Count targets appearing in the first ``k`` recommendations.

    Duplicate recommendations count once; an empty recommendation list
    scores zero.
    """
    if k < 1:
        raise DomainValidationError(f"k must be >= 1, got {k}")
    return len(set(recommended[:k]) & set(targets))


class AccuracySummary(NamedTuple):
    total_hits: int
    denominator: int
    exact: Fraction


def run_accuracy(run: ModelRun, targets: TargetSet, k: int = DEFAULT_K) -> AccuracySummary:
    """Aggregate hits for one run over every target city.

    Cities the run skipped contribute zero hits but still count in the
    denominator.
    """
    hits = _hits_by_city(run, targets, k)
    total = sum(hits.values())
    denominator = targets.total_targets()
    return AccuracySummary(total, denominator, Fraction(total, denominator))


def _hits_by_city(run: ModelRun, targets: TargetSet, k: int) -> dict[str, int]:
    return {
        city: city_hits([rec.name for rec in run.per_city.get(city, ())], names, k)
        for city, names in targets.per_city.items()
    }


@dataclass(frozen=True)
class RunAccuracy:
    model: str
    mode: str
    hits_per_city: Mapping[str, int]
    total_hits: int
    denominator: int
    accuracy_exact: Fraction
    accuracy_display: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "hits_per_city", MappingProxyType(dict(self.hits_per_city)))


@dataclass(frozen=True)
class AccuracyReport:
    """Per-run accuracies plus two overall statistics.

    ``overall_mean`` pools hits over the pooled denominator; ``run_mean``
    is the arithmetic mean of per-run accuracies. They coincide whenever
    every run has the same denominator.
    """

    k: int
    per_run: tuple[RunAccuracy, ...]
    pooled_hits: int
    pooled_denominator: int
    overall_mean_exact: Fraction
    overall_mean_display: str
    run_mean_exact: Fraction
    run_mean_display: str


def build_report(runs: Sequence[ModelRun], targets: TargetSet, k: int = DEFAULT_K) -> AccuracyReport:
    """Evaluate runs in input order and summarize overall accuracy."""
    if not runs:
        raise DomainValidationError("cannot build a report from zero runs")
    per_run = []
    for run in runs:
        hits = _hits_by_city(run, targets, k)
        total = sum(hits.values())
        denominator = targets.total_targets()
        exact = Fraction(total, denominator)
        per_run.append(
            RunAccuracy(
                model=run.model,
                mode=run.mode,
                hits_per_city=hits,
                total_hits=total,
                denominator=denominator,
                accuracy_exact=exact,
                accuracy_display=truncate_display(exact),
            )
        )
    pooled_hits = sum(r.total_hits for r in per_run)
    pooled_denominator = sum(r.denominator for r in per_run)
    overall = Fraction(pooled_hits, pooled_denominator)
    run_mean = sum(r.accuracy_exact for r in per_run) / len(per_run)
    return AccuracyReport(
        k=k,
        per_run=tuple(per_run),
        pooled_hits=pooled_hits,
        pooled_denominator=pooled_denominator,
        overall_mean_exact=overall,
        overall_mean_display=truncate_display(overall),
        run_mean_exact=run_mean,
        run_mean_display=truncate_display(run_mean),
    )


def format_report_table(report: AccuracyReport) -> str:
    """Fixed-width text table: one row per run plus the overall lines."""
    rows = [
        (r.model, r.mode, f"{r.total_hits}/{r.denominator}", r.accuracy_display)
        for r in report.per_run
    ]
    pooled = f"{report.pooled_hits}/{report.pooled_denominator}"
    rows.append(("overall (pooled)", "", pooled, report.overall_mean_display))
    rows.append(("overall (mean of runs)", "", "", report.run_mean_display))
    headers = ("model", "mode", "hits", "accuracy")
    widths = [
        max(len(headers[col]), *(len(row[col]) for row in rows)) for col in range(4)
    ]
    lines = [
        "  ".join(
            [headers[0].ljust(widths[0]), headers[1].ljust(widths[1]),
             headers[2].rjust(widths[2]), headers[3].rjust(widths[3])]
        ).rstrip()
    ]
    for model, mode, hits, accuracy in rows:
        lines.append(
            "  ".join(
                [model.ljust(widths[0]), mode.ljust(widths[1]),
                 hits.rjust(widths[2]), accuracy.rjust(widths[3])]
            ).rstrip()
        )
    return "\n".join(lines) + "\n"


def report_to_dict(report: AccuracyReport) -> dict:
    """Machine-readable report with exact fractions alongside displays."""
    return {
        "k": report.k,
        "runs": [
            {
                "model": r.model,
                "mode": r.mode,
                "hits_per_city": dict(r.hits_per_city),
                "total_hits": r.total_hits,
                "denominator": r.denominator,
                "accuracy_exact": f"{r.total_hits}/{r.denominator}",
                "accuracy_display": r.accuracy_display,
            }
            for r in report.per_run
        ],
        "overall": {
            "pooled": {
                "total_hits": report.pooled_hits,
                "denominator": report.pooled_denominator,
                "exact": f"{report.pooled_hits}/{report.pooled_denominator}",
                "display": report.overall_mean_display,
            },
            "mean_of_runs": {
                "exact": str(report.run_mean_exact),
                "display": report.run_mean_display,
            },
        },
    }
