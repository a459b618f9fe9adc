import functools

import numpy as np
import pytest

from fasevt.chansim import run_monte_carlo
from fasevt.correlation import SystemConfig

M_FULL = 1_000_000


@functools.lru_cache(maxsize=None)
def fas_samples(n_ports, aperture_w, n_samples=M_FULL, seed=20240601):
    """Shared Monte Carlo sets; cached across the whole session."""
    return run_monte_carlo(SystemConfig(n_ports, aperture_w), n_samples, seed)


@pytest.fixture(scope="session")
def fas():
    return fas_samples


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ------------------------------------------------------- acceptance summary

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = report.capstdout.strip().split("  ", 1)[-1] if report.capstdout else ""
        _CRITERIA[name] = ("PASS" if report.outcome == "passed" else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        num = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        status, detail = _CRITERIA[name]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {label}: {detail}")
