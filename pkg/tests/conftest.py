import json
from pathlib import Path

import numpy as np
import pytest

ORACLE = json.loads((Path(__file__).parent / "data" / "fef_oracle.json").read_text())["values"]

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def random_hermitian(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def oracle():
    return ORACLE


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def log(criterion, ok, detail=""):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
