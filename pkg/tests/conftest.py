"""Shared fixtures, plus a terminal summary for the acceptance suite.

Each acceptance test wraps its body in the `acceptance` context manager,
which records one pass/fail line per criterion; the lines are printed in
a dedicated section at the end of the run.
"""

from contextlib import contextmanager

import pytest

_RESULTS: list[tuple[str, bool]] = []


@pytest.fixture
def acceptance():
    @contextmanager
    def record(name: str):
        try:
            yield
        except BaseException:
            _RESULTS.append((name, False))
            raise
        _RESULTS.append((name, True))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _RESULTS:
        terminalreporter.write_line("%s  %s" % ("PASS" if ok else "FAIL", name))
