import numpy as np
import pytest
from hypothesis import settings

from nonlocal_euler import InfiniteKernel, periodize

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def gauss10_64():
    return periodize(InfiniteKernel.gaussian(10.0), 64)


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    for name, value in report.user_properties:
        if name == "criterion":
            crit = value
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ACCEPTANCE.setdefault(crit, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: int(c.split()[0])):
        ok = all(o == "passed" for o in ACCEPTANCE[crit])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}")
