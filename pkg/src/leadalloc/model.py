"""Shared domain types: neighborhood records, datasets, weights, rankings.

Everything here is immutable after construction and validated on
construction; downstream modules can rely on the invariants without
re-checking them.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    DomainValidationError,
    InvalidNameError,
    UnknownCityError,
)

# Canonical CSV column names for the three core metrics.
COL_NEIGHBORHOOD = "neighborhood"
COL_PREVALENCE = "prevalence_per_1000"
COL_UNTESTED = "untested_pct"
COL_COVERAGE = "public_coverage_pct"
CORE_COLUMNS = (COL_NEIGHBORHOOD, COL_PREVALENCE, COL_UNTESTED, COL_COVERAGE)

_ZIP_RE = re.compile(r"^\d{5}$")


def canonicalize_name(raw: str, aliases: "AliasTable | None" = None) -> str:
    """Normalize a neighborhood name to its canonical matching form.

    Lowercases, folds every punctuation or dash character (any Unicode
    variant) to a space, collapses whitespace, then applies the alias
    table, if any. Idempotent: canonical forms map to themselves.
    """
    folded = "".join(ch if ch.isalnum() else " " for ch in raw.lower())
    name = " ".join(folded.split())
    if not name:
        raise InvalidNameError(f"name is empty after normalization: {raw!r}")
    if aliases is not None:
        name = aliases.resolve(name)
    return name


@dataclass(frozen=True)
class AliasTable:
    """Maps alternate neighborhood spellings onto their canonical name.

    Built from a ``{"canonical": ["alias", ...]}`` mapping; both sides are
    normalized on load. Chains are rejected so resolution is a single,
    idempotent lookup.
    """

    alias_to_canonical: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "alias_to_canonical", MappingProxyType(dict(self.alias_to_canonical))
        )

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[str]]) -> "AliasTable":
        alias_to_canonical: dict[str, str] = {}
        canonicals = set()
        for canonical_raw, alias_list in mapping.items():
            canonical = canonicalize_name(canonical_raw)
            canonicals.add(canonical)
            for alias_raw in alias_list:
                alias = canonicalize_name(alias_raw)
                if alias == canonical:
                    continue
                existing = alias_to_canonical.get(alias)
                if existing is not None and existing != canonical:
                    raise DomainValidationError(
                        f"alias {alias!r} maps to both {existing!r} and {canonical!r}"
                    )
                alias_to_canonical[alias] = canonical
        chained = canonicals & alias_to_canonical.keys()
        if chained:
            raise DomainValidationError(
                f"canonical names also appear as aliases (chained mapping): {sorted(chained)}"
            )
        return cls(alias_to_canonical)

    @classmethod
    def from_file(cls, path: str | Path) -> "AliasTable":
        with open(path, encoding="utf-8") as fh:
            try:
                mapping = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainValidationError(f"alias file {path}: {exc}") from exc
        if not isinstance(mapping, dict):
            raise DomainValidationError(f"alias file {path}: expected a JSON object")
        return cls.from_mapping(mapping)

    def resolve(self, normalized_name: str) -> str:
        return self.alias_to_canonical.get(normalized_name, normalized_name)

    def __len__(self) -> int:
        return len(self.alias_to_canonical)


class UnitKind(Enum):
    NAMED_AREA = "named_area"
    ZIP_CODE = "zip_code"


class WeightVariant(Enum):
    """Which of the two supported weight-derivation rules is in force."""

    TEXT = "text"
    ALGORITHM = "algorithm"


class Strategy(Enum):
    PROPORTIONAL = "proportional"
    TOP_K_EQUAL = "top_k_equal"
    RANK_WEIGHTED = "rank_weighted"


@dataclass(frozen=True)
class CityProfile:
    city: str
    unit_kind: UnitKind
    bll_threshold_ug_dl: float


_CITY_REGISTRY: dict[str, CityProfile] = {
    "chicago": CityProfile("chicago", UnitKind.NAMED_AREA, 5.0),
    "nyc": CityProfile("nyc", UnitKind.NAMED_AREA, 5.0),
    "dc": CityProfile("dc", UnitKind.ZIP_CODE, 3.5),
    # Ships with the synthetic demo dataset; not a real jurisdiction.
    "demo": CityProfile("demo", UnitKind.NAMED_AREA, 5.0),
}


def known_cities() -> tuple[str, ...]:
    return tuple(_CITY_REGISTRY)


def city_profile(city: str) -> CityProfile:
    key = city.strip().lower()
    try:
        return _CITY_REGISTRY[key]
    except KeyError:
        raise UnknownCityError(
            f"unknown city {city!r}; known cities: {', '.join(_CITY_REGISTRY)}"
        ) from None


def register_city(
    city: str, unit_kind: UnitKind, bll_threshold_ug_dl: float, *, replace: bool = False
) -> CityProfile:
    """Add a city to the registry so its datasets can be parsed."""
    key = city.strip().lower()
    if not key:
        raise DomainValidationError("city identifier must be non-empty")
    if key in _CITY_REGISTRY and not replace:
        raise DomainValidationError(f"city {key!r} is already registered")
    profile = CityProfile(key, unit_kind, float(bll_threshold_ug_dl))
    _CITY_REGISTRY[key] = profile
    return profile


@dataclass(frozen=True)
class NeighborhoodRecord:
    """One neighborhood's raw metrics.

    ``name`` is expected in canonical form (see :func:`canonicalize_name`);
    ``extra_factors`` holds any additional named numeric columns.
    """

    name: str
    prevalence: float
    untested_pct: float
    public_coverage_pct: float
    extra_factors: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise InvalidNameError("neighborhood name must be non-empty")
        if not math.isfinite(self.prevalence) or self.prevalence < 0:
            raise DomainValidationError(
                f"{self.name}: prevalence must be a non-negative real, got {self.prevalence}"
            )
        for label, value in (
            (COL_UNTESTED, self.untested_pct),
            (COL_COVERAGE, self.public_coverage_pct),
        ):
            if not math.isfinite(value) or not 0 <= value <= 100:
                raise DomainValidationError(
                    f"{self.name}: {label} out of range [0,100], got {value}"
                )
        object.__setattr__(self, "extra_factors", MappingProxyType(dict(self.extra_factors)))

    def metric(self, factor: str) -> float | None:
        """Value of a named metric column, or None if absent on this record."""
        if factor == COL_PREVALENCE:
            return self.prevalence
        if factor == COL_UNTESTED:
            return self.untested_pct
        if factor == COL_COVERAGE:
            return self.public_coverage_pct
        return self.extra_factors.get(factor)


@dataclass(frozen=True)
class CityDataset:
    """Validated set of neighborhood records for one city."""

    city: str
    records: tuple[NeighborhoodRecord, ...]
    bll_threshold_ug_dl: float
    unit_kind: UnitKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise DomainValidationError(f"{self.city}: dataset has no records")
        seen: set[str] = set()
        for record in self.records:
            if record.name in seen:
                raise DomainValidationError(
                    f"{self.city}: duplicate neighborhood {record.name!r}"
                )
            seen.add(record.name)
            if self.unit_kind is UnitKind.ZIP_CODE and not _ZIP_RE.match(record.name):
                raise DomainValidationError(
                    f"{self.city}: {record.name!r} is not a 5-digit ZIP code"
                )

    def __len__(self) -> int:
        return len(self.records)

    def names(self) -> tuple[str, ...]:
        return tuple(record.name for record in self.records)

    def factor_names(self) -> tuple[str, ...]:
        """Core metric columns plus all extra factors seen on any record."""
        extras = sorted({name for record in self.records for name in record.extra_factors})
        return (COL_UNTESTED, COL_COVERAGE, *extras)


@dataclass(frozen=True)
class WeightConfig:
    """Priority-score weights plus the correlation they were derived from."""

    alpha: float
    beta: float
    gamma: float
    variant: WeightVariant
    source_correlation: float
    normalized: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainValidationError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.beta < 0 or self.gamma < 0:
            raise DomainValidationError("beta and gamma must be non-negative")
        if not -1 <= self.source_correlation <= 1:
            raise DomainValidationError(
                f"source correlation must lie in [-1, 1], got {self.source_correlation}"
            )
        if self.normalized:
            total = self.alpha + self.beta + self.gamma
            if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
                raise DomainValidationError(
                    f"normalized weights must sum to 1, got {total}"
                )
        else:
            r_clamped = min(max(self.source_correlation, 0.0), 1.0)
            if self.variant is WeightVariant.TEXT:
                expected_gamma = r_clamped * (1 - self.alpha)
            else:
                expected_gamma = r_clamped
            expected_beta = (1 - self.alpha) * (1 - expected_gamma)
            if not (
                math.isclose(self.gamma, expected_gamma, rel_tol=1e-9, abs_tol=1e-12)
                and math.isclose(self.beta, expected_beta, rel_tol=1e-9, abs_tol=1e-12)
            ):
                raise DomainValidationError(
                    f"weights (beta={self.beta}, gamma={self.gamma}) do not follow the "
                    f"{self.variant.value} derivation rule for r={self.source_correlation}, "
                    f"alpha={self.alpha}"
                )

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "variant": self.variant.value,
            "source_correlation": self.source_correlation,
            "normalized": self.normalized,
        }


class RankingEntry(NamedTuple):
    name: str
    raw_score: float
    scaled_score: float


@dataclass(frozen=True)
class PriorityRanking:
    """Descending-ordered priority list for one city."""

    city: str
    weights: WeightConfig
    entries: tuple[RankingEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", tuple(RankingEntry(*entry) for entry in self.entries)
        )
        if not self.entries:
            raise DomainValidationError(f"{self.city}: ranking has no entries")
        for entry in self.entries:
            if entry.raw_score < 0:
                raise DomainValidationError(
                    f"{self.city}: negative raw score for {entry.name!r}"
                )
            if not 0 <= entry.scaled_score <= 10:
                raise DomainValidationError(
                    f"{self.city}: scaled score out of [0, 10] for {entry.name!r}"
                )
        ordered = sorted(self.entries, key=lambda e: (-e.raw_score, e.name))
        if list(self.entries) != ordered:
            raise DomainValidationError(
                f"{self.city}: entries are not sorted by raw score descending "
                "with canonical-name tie-break"
            )
        max_raw = self.entries[0].raw_score
        scaled = [entry.scaled_score for entry in self.entries]
        if max_raw > 0:
            if max(scaled) != 10.0:
                raise DomainValidationError(
                    f"{self.city}: top scaled score must be exactly 10.0, got {max(scaled)}"
                )
            if scaled != sorted(scaled, reverse=True):
                raise DomainValidationError(
                    f"{self.city}: scaled ordering disagrees with raw ordering"
                )
        elif any(scaled):
            raise DomainValidationError(
                f"{self.city}: all-zero raw scores require all-zero scaled scores"
            )

    def names(self) -> tuple[str, ...]:
        return tuple(entry.name for entry in self.entries)


class AllocationEntry(NamedTuple):
    name: str
    kits: int


@dataclass(frozen=True)
class AllocationPlan:
    """Integer kit assignment mirroring the ranking it was derived from."""

    city: str
    total_kits: int
    allocations: tuple[AllocationEntry, ...]
    strategy: Strategy
    apportionment: str = "largest_remainder"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "allocations", tuple(AllocationEntry(*entry) for entry in self.allocations)
        )
        if self.total_kits < 1:
            raise DomainValidationError(f"total_kits must be >= 1, got {self.total_kits}")
        if any(entry.kits < 0 for entry in self.allocations):
            raise DomainValidationError("kit counts must be non-negative")
        assigned = sum(entry.kits for entry in self.allocations)
        if assigned != self.total_kits:
            raise DomainValidationError(
                f"allocations sum to {assigned}, expected {self.total_kits}"
            )


class Recommendation(NamedTuple):
    name: str
    kits: int


@dataclass(frozen=True)
class ModelRun:
    """One recorded allocation recommendation, in recommendation order."""

    model: str
    mode: str
    per_city: Mapping[str, tuple[Recommendation, ...]]

    def __post_init__(self) -> None:
        frozen = {
            city: tuple(Recommendation(*rec) for rec in recs)
            for city, recs in self.per_city.items()
        }
        for city, recs in frozen.items():
            for rec in recs:
                if rec.kits < 0:
                    raise DomainValidationError(
                        f"{self.model} ({self.mode}), {city}: negative kits for {rec.name!r}"
                    )
        object.__setattr__(self, "per_city", MappingProxyType(frozen))

    @property
    def label(self) -> str:
        return f"{self.model} ({self.mode})"


@dataclass(frozen=True)
class TargetSet:
    """Per-city sets of empirically highest-risk neighborhoods."""

    per_city: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        frozen = {city: frozenset(names) for city, names in self.per_city.items()}
        if not frozen:
            raise DomainValidationError("target set lists no cities")
        for city, names in frozen.items():
            if not names:
                raise DomainValidationError(f"target set for {city!r} is empty")
        object.__setattr__(self, "per_city", MappingProxyType(frozen))

    def cities(self) -> tuple[str, ...]:
        return tuple(self.per_city)

    def total_targets(self) -> int:
        return sum(len(names) for names in self.per_city.values())
