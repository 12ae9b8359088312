"""Top-k overlap accuracy and its display contract."""

from __future__ import annotations

from fractions import Fraction

import pytest

from leadalloc.errors import DomainValidationError
from leadalloc.evaluation import (
    build_report,
    city_hits,
    format_report_table,
    report_to_dict,
    run_accuracy,
    truncate_display,
)
from leadalloc.ingest import parse_model_runs, parse_targets
from leadalloc.model import ModelRun, Recommendation, TargetSet
from leadalloc import resources


@pytest.fixture(scope="module")
def bundled():
    runs, _ = parse_model_runs(resources.model_runs_path())
    targets, _ = parse_targets(resources.targets_path())
    return runs, targets


class TestTruncateDisplay:
    @pytest.mark.parametrize(
        ("num", "den", "expected"),
        [
            (6, 9, "0.66"),
            (5, 9, "0.55"),
            (3, 9, "0.33"),
            (2, 9, "0.22"),
            (21, 45, "0.46"),
            (9, 45, "0.20"),
            (9, 9, "1.00"),
            (0, 9, "0.00"),
            (2, 3, "0.66"),  # rounding would print 0.67
            (999, 1000, "0.99"),  # rounding would print 1.00
        ],
    )
    def test_truncates_toward_zero(self, num, den, expected):
        assert truncate_display(Fraction(num, den)) == expected

    def test_integer_inputs(self):
        assert truncate_display(2) == "2.00"

    def test_places_parameter(self):
        assert truncate_display(Fraction(1, 3), places=4) == "0.3333"
        assert truncate_display(Fraction(2, 3), places=1) == "0.6"

    def test_negative_rejected(self):
        with pytest.raises(DomainValidationError, match="non-negative"):
            truncate_display(Fraction(-1, 3))


class TestCityHits:
    CHICAGO_TARGETS = frozenset({"englewood", "west englewood", "austin"})

    def test_two_of_three(self):
        recommended = ["englewood", "west englewood", "little village"]
        assert city_hits(recommended, self.CHICAGO_TARGETS) == 2

    def test_order_within_top_k_is_irrelevant(self):
        recommended = ["little village", "west englewood", "englewood"]
        assert city_hits(recommended, self.CHICAGO_TARGETS) == 2

    def test_entries_beyond_k_do_not_count(self):
        recommended = ["little village", "north lawndale", "south shore", "austin"]
        assert city_hits(recommended, self.CHICAGO_TARGETS, k=3) == 0
        assert city_hits(recommended, self.CHICAGO_TARGETS, k=4) == 1

    def test_duplicates_count_once(self):
        assert city_hits(["austin", "austin", "austin"], self.CHICAGO_TARGETS) == 1

    def test_empty_recommendations_score_zero(self):
        assert city_hits([], self.CHICAGO_TARGETS) == 0

    def test_k_one_uses_only_the_first(self):
        assert city_hits(["austin", "englewood"], self.CHICAGO_TARGETS, k=1) == 1
        assert city_hits(["pullman", "englewood"], self.CHICAGO_TARGETS, k=1) == 0

    def test_k_must_be_positive(self):
        with pytest.raises(DomainValidationError, match="k must be"):
            city_hits(["austin"], self.CHICAGO_TARGETS, k=0)


class TestRunAccuracy:
    def test_missing_city_still_counts_in_denominator(self):
        run = ModelRun(
            model="m",
            mode="d",
            per_city={"chicago": (Recommendation("austin", 500),)},
        )
        targets = TargetSet(
            per_city={
                "chicago": frozenset({"austin", "englewood"}),
                "nyc": frozenset({"greenpoint"}),
            }
        )
        summary = run_accuracy(run, targets)
        assert summary.total_hits == 1
        assert summary.denominator == 3
        assert summary.exact == Fraction(1, 3)

    def test_cities_not_in_targets_are_ignored(self):
        run = ModelRun(
            model="m",
            mode="d",
            per_city={
                "chicago": (Recommendation("austin", 500),),
                "boston": (Recommendation("roxbury", 500),),
            },
        )
        targets = TargetSet(per_city={"chicago": frozenset({"austin"})})
        assert run_accuracy(run, targets).exact == Fraction(1, 1)


class TestBuildReport:
    def test_bundled_fixture_reproduces_recorded_accuracies(self, bundled):
        runs, targets = bundled
        report = build_report(runs, targets)
        assert [r.total_hits for r in report.per_run] == [6, 5, 3, 5, 2]
        assert all(r.denominator == 9 for r in report.per_run)
        assert [r.accuracy_display for r in report.per_run] == [
            "0.66",
            "0.55",
            "0.33",
            "0.55",
            "0.22",
        ]
        assert report.pooled_hits == 21
        assert report.pooled_denominator == 45
        assert report.overall_mean_display == "0.46"
        # Uniform denominators make the two overall statistics coincide.
        assert report.run_mean_exact == report.overall_mean_exact == Fraction(21, 45)
        assert report.run_mean_display == "0.46"

    def test_bundled_fixture_per_city_hits(self, bundled):
        runs, targets = bundled
        report = build_report(runs, targets)
        assert dict(report.per_run[0].hits_per_city) == {"chicago": 2, "nyc": 1, "dc": 3}
        assert dict(report.per_run[2].hits_per_city) == {"chicago": 1, "nyc": 2, "dc": 0}
        assert dict(report.per_run[4].hits_per_city) == {"chicago": 1, "nyc": 0, "dc": 1}

    def test_k_one_recount(self, bundled):
        runs, targets = bundled
        report = build_report(runs, targets, k=1)
        assert [r.total_hits for r in report.per_run] == [3, 2, 2, 2, 0]
        assert report.pooled_hits == 9
        assert report.overall_mean_display == "0.20"

    def test_zero_runs_rejected(self, bundled):
        _, targets = bundled
        with pytest.raises(DomainValidationError, match="zero runs"):
            build_report([], targets)

    def test_run_order_is_preserved(self, bundled):
        runs, targets = bundled
        report = build_report(list(reversed(runs)), targets)
        assert [r.model for r in report.per_run] == [run.model for run in reversed(runs)]
        assert report.pooled_hits == 21


class TestRendering:
    def test_table_layout(self, bundled):
        runs, targets = bundled
        table = format_report_table(build_report(runs, targets))
        lines = table.splitlines()
        assert lines[0].split() == ["model", "mode", "hits", "accuracy"]
        assert lines[1].endswith("6/9      0.66")
        assert lines[-2].split() == ["overall", "(pooled)", "21/45", "0.46"]
        assert lines[-1].startswith("overall (mean of runs)")
        assert lines[-1].endswith("0.46")
        assert table.endswith("\n")

    def test_dict_rendering(self, bundled):
        runs, targets = bundled
        doc = report_to_dict(build_report(runs, targets))
        assert doc["k"] == 3
        assert doc["runs"][0]["accuracy_exact"] == "6/9"
        assert doc["runs"][0]["accuracy_display"] == "0.66"
        assert doc["runs"][0]["hits_per_city"] == {"chicago": 2, "nyc": 1, "dc": 3}
        assert doc["overall"]["pooled"]["exact"] == "21/45"
        assert doc["overall"]["pooled"]["display"] == "0.46"
        assert doc["overall"]["mean_of_runs"]["exact"] == "7/15"
        assert doc["overall"]["mean_of_runs"]["display"] == "0.46"
