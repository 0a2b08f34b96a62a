from pathlib import Path

import pytest

from oastatus.ingest import load_gold_directory
from oastatus.licence import LicencePolicy

FIXTURES = Path(__file__).parent / "fixtures"

CC_BY = "https://creativecommons.org/licenses/by/4.0/"
CC0 = "https://creativecommons.org/publicdomain/zero/1.0/"
ELSEVIER_TDM = "https://www.elsevier.com/tdm/userlicense/1.0/"
WILEY_TDM = "http://doi.wiley.com/10.1002/tdm_license_1.1"
UNKNOWN_URL = "https://publisher.example/licence/custom"

_acceptance_lines: list[str] = []


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def policy() -> LicencePolicy:
    return LicencePolicy.load(FIXTURES / "policy.txt")


@pytest.fixture(scope="session")
def gold():
    return load_gold_directory(FIXTURES / "gold.csv")


@pytest.fixture
def criterion(request):
    """Report one PASS/FAIL line per acceptance criterion in the terminal summary."""
    marker = request.node.get_closest_marker("criterion")
    label = marker.args[0] if marker else request.node.name
    yield
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {label}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
