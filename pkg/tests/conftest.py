import re

import pytest

from qsymx.cartan import build_root_system
from qsymx.uqg import build_fundamental, build_module, build_simple


@pytest.fixture(scope="session")
def a1():
    return build_root_system("A1")


@pytest.fixture(scope="session")
def a2():
    return build_root_system("A2")


@pytest.fixture(scope="session")
def b2():
    return build_root_system("B2")


def fundamentals(cartan_type, q=1.2):
    rs = build_root_system(cartan_type)
    return [build_fundamental(rs, i, q) for i in range(rs.rank)]


def module(cartan_type, summands, q=1.2):
    rs = build_root_system(cartan_type)
    if len(summands) == 1:
        return build_simple(rs, tuple(summands[0]), q)
    return build_module(rs, summands, q)


_ACCEPT = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _ACCEPT.search(getattr(rep, "nodeid", ""))
            if m and (rep.when == "call" or outcome == "error"):
                detail = dict(getattr(rep, "user_properties", [])).get("detail", "")
                rows.append((int(m.group(1)), m.group(2), outcome == "passed", detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(rows):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {name}: {status}  {detail}")
