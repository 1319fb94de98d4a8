from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from ranprocure.game import ModelParams, RegionInputs, default_portfolio

DATA = Path(str(resources.files("ranprocure") / "data"))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def params() -> ModelParams:
    return ModelParams()


@pytest.fixture(scope="session")
def portfolio() -> list[RegionInputs]:
    return default_portfolio()


@pytest.fixture(scope="session")
def urban() -> RegionInputs:
    return RegionInputs.from_profile("Urban")


@pytest.fixture(scope="session")
def rural5() -> RegionInputs:
    return RegionInputs.from_profile("Rural5")


# -- acceptance summary ----------------------------------------------------------

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        for key, value in report.user_properties:
            if key == "detail":
                detail = value
        _acceptance[name] = ("PASS" if report.outcome == "passed" else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[1])):
        status, detail = _acceptance[name]
        terminalreporter.write_line(f"{status}  {name}" + (f"  ({detail})" if detail else ""))
