import time
from contextlib import contextmanager

import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line per acceptance criterion and enforces its time budget."""
    lines = request.config.stash[_LINES_KEY]

    @contextmanager
    def check(number: int, title: str, budget_s: float):
        start = time.perf_counter()
        info: dict = {}
        try:
            yield info
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            reason = str(exc).splitlines()[0][:160] if str(exc) else type(exc).__name__
            lines.append(f"CRITERION {number:2d} FAIL  {title} [{elapsed:.1f}s / {budget_s:g}s] {reason}")
            raise
        elapsed = time.perf_counter() - start
        detail = info.get("detail", "")
        if elapsed > budget_s:
            lines.append(f"CRITERION {number:2d} FAIL  {title} [{elapsed:.1f}s / {budget_s:g}s] over time budget {detail}")
            pytest.fail(f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s")
        lines.append(f"CRITERION {number:2d} PASS  {title} [{elapsed:.1f}s / {budget_s:g}s] {detail}".rstrip())

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
