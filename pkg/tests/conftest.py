import math

import numpy as np
import pytest

from qhfm import WalkParams, instance


def make_params(n, m=8, l=8, theta0=math.pi / 4, theta1=math.pi / 3, alpha=math.pi / 4):
    return WalkParams(n, m, l, theta0, theta1, alpha)


@pytest.fixture
def params25():
    return instance(200)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", []))
            if rep.when == "call" and "criterion" in props:
                rows.append((props["criterion"], outcome, props.get("detail", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, outcome, detail in sorted(rows):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
