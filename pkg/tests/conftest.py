from pathlib import Path

import numpy as np
import pytest

from vmiqa import load_image

DATA = Path(__file__).parent / "data"
PHOTO_NAMES = ("camera", "coffee", "rocket")


@pytest.fixture(scope="session")
def photos():
    return {name: load_image(DATA / f"{name}.pgm") for name in PHOTO_NAMES}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_RESULTS = []


def record(criterion, ok, detail=""):
    """Log one acceptance criterion outcome and fail the test if it missed."""
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_RESULTS.append(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
