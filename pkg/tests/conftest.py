import numpy as np
import pytest

from gso.sampling import default_rng


@pytest.fixture
def rng():
    return default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in getattr(rep, "nodeid", "") and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


def random_rotation(rng):
    from gso.phasespace import rotation_single_mode

    return rotation_single_mode(rng.uniform(0, 2 * np.pi))
