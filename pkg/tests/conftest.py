from contextlib import contextmanager
from time import perf_counter

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Time one acceptance criterion and record a PASS/FAIL line for the summary."""

    @contextmanager
    def run(k: int, title: str, limit: float):
        t0 = perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            dt = perf_counter() - t0
            ok = ok and dt < limit
            _LINES[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {dt:8.2f}s (limit {limit:g}s)  {title}"
            print(_LINES[k])
        assert dt < limit, f"criterion {k} took {dt:.1f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_LINES):
            terminalreporter.write_line(_LINES[k])
