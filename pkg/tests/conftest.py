from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from diagram_groups import Presentation, parse_presentation

PRESENTATIONS = Path(__file__).resolve().parents[1] / "presentations"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def load(name: str) -> Presentation:
    return parse_presentation((PRESENTATIONS / f"{name}.txt").read_text(encoding="utf-8"))


def presentation_path(name: str) -> str:
    return str(PRESENTATIONS / f"{name}.txt")


@pytest.fixture(scope="session")
def abelian3() -> Presentation:
    """Free commutative semigroup of rank three, relations written ab=ba, ac=ca, bc=cb."""
    return Presentation.from_pairs("abc", [("ab", "ba"), ("ac", "ca"), ("bc", "cb")])


@pytest.fixture(scope="session")
def commuting() -> Presentation:
    return load("commuting")


@pytest.fixture(scope="session")
def absorbs() -> Presentation:
    return load("a_absorbs_b")


@pytest.fixture(scope="session")
def absorbing_p() -> Presentation:
    return load("absorbing_p")


@pytest.fixture(scope="session")
def self_crossing() -> Presentation:
    return load("self_crossing")


@pytest.fixture(scope="session")
def free_family() -> dict:
    return {name: load(name) for name in ("free_1", "free_2", "free_3")}


_CRITERIA: list[tuple[str, str]] = []


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test; its outcome is listed in the terminal summary."""

    def tag(label: str) -> None:
        record_property("criterion", label)

    return tag


def pytest_runtest_logreport(report):
    labels = [v for k, v in report.user_properties if k == "criterion"]
    if not labels:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.append((labels[0], "PASS" if report.outcome == "passed" else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label, outcome in sorted(_CRITERIA, key=lambda x: int(x[0].split(".")[0])):
        terminalreporter.write_line(f"{outcome}  {label}")
