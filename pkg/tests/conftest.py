from __future__ import annotations

import re
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    match = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    key = f"criterion {int(match.group(1)):2d}: {match.group(2).replace('_', ' ')}"
    if report.failed:
        _CRITERIA[key] = "FAIL"
    elif report.when == "call" and key not in _CRITERIA:
        _CRITERIA[key] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[key]}  {key}")
