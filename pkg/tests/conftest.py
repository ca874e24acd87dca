import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

os.environ.setdefault("TOGGLELAB_CHECK", "1")
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    number = int(name.split("_")[2])
    label = " ".join(name.split("_")[3:])
    _criteria[number] = (label, "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        label, outcome = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {label}: {outcome}")
