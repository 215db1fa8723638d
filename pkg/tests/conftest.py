import numpy as np
import pytest

from gradfuse.synth import synth_suite

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def suite():
    """The 20-pair desk-scale suite: 256x256, sigma 3, seeds 0..19 alternating half/disk masks."""
    return synth_suite(20, 256, 3.0, ("half", "disk"))


@pytest.fixture
def report():
    def _record(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
