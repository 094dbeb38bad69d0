import contextlib
import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_LINES = pytest.StashKey[dict]()


class Criterion:
    """Collects details for one acceptance line and enforces its time limit."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.details = []

    def note(self, text: str) -> None:
        self.details.append(text)


@pytest.fixture
def criterion(request):
    lines = request.config.stash.setdefault(_LINES, {})

    @contextlib.contextmanager
    def run(number: int, title: str, limit: float = 60.0):
        c = Criterion(number, title, limit)
        start = time.perf_counter()
        verdict = "FAIL"
        try:
            yield c
            elapsed = time.perf_counter() - start
            if elapsed > limit:
                c.note(f"over the {limit:g} s limit")
                raise AssertionError(f"criterion {number} took {elapsed:.1f} s, limit {limit:g} s")
            verdict = "PASS"
        except BaseException as exc:
            c.note(f"{type(exc).__name__}: {exc}".splitlines()[0][:120])
            raise
        finally:
            elapsed = time.perf_counter() - start
            detail = "; ".join(c.details)
            line = f"criterion {number:2d}  {verdict}  {elapsed:7.2f}s  {title}"
            lines[number] = f"{line}  [{detail}]" if detail else line

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
