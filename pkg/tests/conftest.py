import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wlgroups import (
    make_abelian,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_quaternion,
    make_symmetric,
)

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> [(passed, detail), ...], filled by the acceptance suite
ACCEPTANCE = {}


def report(criterion, passed, detail):
    ACCEPTANCE.setdefault(criterion, []).append((bool(passed), detail))
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[criterion]
        passed = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def small_groups():
    return {
        "Z1": make_cyclic(1),
        "Z2": make_cyclic(2),
        "Z4": make_cyclic(4),
        "V4": make_abelian([2, 2]),
        "Z6": make_cyclic(6),
        "S3": make_symmetric(3),
        "D4": make_dihedral(4),
        "Q8": make_quaternion(),
        "Z2xZ4": make_abelian([2, 4]),
        "Z12": make_cyclic(12),
        "A4": make_alternating(4),
        "D6": make_dihedral(6),
    }


@pytest.fixture(scope="session")
def a5():
    return make_alternating(5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
