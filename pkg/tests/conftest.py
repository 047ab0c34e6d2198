"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import pytest

from planecode.builders import build_hall9, build_pg2
from planecode.census import bounded_weight_census
from planecode.linear import code_from_system, dual_code

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def pg():
    cache = {}

    def get(q):
        if q not in cache:
            cache[q] = build_pg2(q)
        return cache[q]

    return get


@pytest.fixture(scope="session")
def hall9():
    return build_hall9()


@pytest.fixture(scope="session")
def pg5_lowweight(pg):
    """Every codeword of C_5(PG(2,5)) of weight <= 12, words kept."""
    code = code_from_system(pg(5).system, 5)
    return bounded_weight_census(code, 12, want_words=True, seed=0)


@pytest.fixture(scope="session")
def pg5_dual_lowweight(pg):
    code = dual_code(code_from_system(pg(5).system, 5))
    return bounded_weight_census(code, 12, seed=0)


@pytest.fixture
def acceptance(request):
    """Record the detail line for a numbered acceptance criterion."""

    def record(number: int, detail: str):
        request.node.user_properties.append(("criterion", number))
        request.node.user_properties.append(("detail", detail))

    return record


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        n = props["criterion"]
        status = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE[n] = (status, props.get("detail", ""))
    elif "test_acceptance.py::test_criterion_" in report.nodeid and report.failed:
        n = int(report.nodeid.rsplit("_", 1)[-1].split("[")[0])
        _ACCEPTANCE[n] = ("FAIL", str(report.longrepr).splitlines()[-1][:160])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
