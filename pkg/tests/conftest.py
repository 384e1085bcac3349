import shutil
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))
sys.path.insert(0, str(TESTS / "oracle"))

FIXTURES = TESTS / "fixtures" / "java"

from repo_builder import build_detector_repo, build_separable_repo, build_stability_repo  # noqa: E402

needs_git = pytest.mark.skipif(shutil.which("git") is None, reason="git executable not found")


@pytest.fixture(scope="session")
def detector_repo(tmp_path_factory):
    return build_detector_repo(tmp_path_factory.mktemp("repos") / "detector")


@pytest.fixture(scope="session")
def stability_repo(tmp_path_factory):
    return build_stability_repo(tmp_path_factory.mktemp("repos") / "stability")


@pytest.fixture(scope="session")
def separable_repo(tmp_path_factory):
    return build_separable_repo(tmp_path_factory.mktemp("repos") / "separable")



# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and not report.failed):
        return
    number, title = mark.args
    ok = report.passed if report.when == "call" else False
    prev = _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, prev and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
