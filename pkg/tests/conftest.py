import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERION_8 = "test_criterion_8_property_suite"
_session = {"start": None, "others": 0, "failures": []}


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    # the suite-level criterion inspects everything else, so it runs last
    last = [it for it in items if it.name == CRITERION_8]
    rest = [it for it in items if it.name != CRITERION_8]
    items[:] = rest + last
    _session["others"] = sum("test_acceptance.py" not in it.nodeid for it in rest)


def pytest_runtest_logreport(report):
    if report.failed and "test_acceptance.py" not in report.nodeid:
        _session["failures"].append(report.nodeid)


@pytest.fixture
def suite_session():
    """Start time, count of collected non-acceptance tests, and their failures."""
    return _session


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n, real=False):
    a = rng.standard_normal((n, n))
    if not real:
        a = a + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    # one PASS/FAIL line per acceptance criterion, in criterion order
    lines = []
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "call") != "call" and key != "error":
                continue
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::")[-1]
                lines.append((name, "PASS" if key == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict} {name}")
