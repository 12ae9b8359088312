"""Shared fixtures plus a terminal summary of the acceptance criteria."""

from __future__ import annotations

import textwrap
from pathlib import Path

import pytest

from leadalloc import resources

GOLDEN_DIR = Path(__file__).parent / "golden"

_acceptance_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call":
        _acceptance_outcomes[report.nodeid] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance_outcomes.items():
        status = {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{status}  {nodeid.split('::', 1)[-1]}")


@pytest.fixture
def demo_csv() -> Path:
    return resources.demo_dataset_path()


@pytest.fixture
def bundled_runs() -> Path:
    return resources.model_runs_path()


@pytest.fixture
def bundled_targets() -> Path:
    return resources.targets_path()


@pytest.fixture
def write_file(tmp_path):
    """Write dedented text to a temp file and return its path."""
    counter = iter(range(10_000))

    def _write(content: str, name: str | None = None) -> Path:
        path = tmp_path / (name or f"input{next(counter)}.txt")
        path.write_text(textwrap.dedent(content).lstrip("\n"), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def golden():
    """Load a golden file's text."""

    def _load(name: str) -> str:
        return (GOLDEN_DIR / name).read_text(encoding="utf-8")

    return _load
