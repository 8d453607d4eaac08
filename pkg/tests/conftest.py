import re
from fractions import Fraction

import pytest

from opident.conmatrix import build_consequence_matrix
from opident.matrices import partial_smith_form
from opident.rings import PolyRing
from opident import tables


@pytest.fixture(scope="session")
def ring3():
    return PolyRing(("a", "b", "c"))


@pytest.fixture(scope="session")
def ring6():
    return PolyRing(("a", "b", "c", "d", "e", "f"))


@pytest.fixture(scope="session")
def con21():
    return build_consequence_matrix(2, 1)


@pytest.fixture(scope="session")
def con22():
    return build_consequence_matrix(2, 2)


@pytest.fixture(scope="session")
def published_block1(ring6):
    # case-1 residual block as published, 34 x 4
    return tables.block_matrix("case1matrixB.txt", ring6)


@pytest.fixture(scope="session")
def published_block3(ring6):
    # case-3 residual block as published (zero rows already deleted), 24 x 4
    return tables.block_matrix("case3matrixB.txt", ring6)


@pytest.fixture(scope="session")
def psf22_case1(con22):
    # analysis orientation for (2,2) is the 50 x 20 transpose
    m = con22.matrix.transpose().substitute({"a": Fraction(1)})
    return partial_smith_form(m), m


# -- acceptance reporting ---------------------------------------------------
#
# test_acceptance.py names its tests test_criterion<N>_...; collect their
# outcomes and print one PASS/FAIL line per criterion after the run.

_CRITERIA_TITLES = {
    1: "monomial combinatorics and basis tables",
    2: "consequence matrices",
    3: "multiplicity-1 rank theorem",
    4: "minor census of the case-1 block",
    5: "Groebner reproduction (small)",
    6: "Groebner reproduction (large, extended tier)",
    7: "multiplicity-2 rank theorem",
    8: "zero-set verification",
    9: "property suites",
}

_CRITERIA_NOTES = {
    4: "raw counts and degree ranges exact; published distinct counts are "
    "expression-pipeline artifacts (xfail; see test docstring)",
    6: "run with -m extended",
}


def pytest_configure(config):
    config._criterion_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    m = re.match(r"test_criterion(\d+)", item.name)
    if not m:
        return
    n = int(m.group(1))
    store = item.config._criterion_outcomes.setdefault(n, [])
    if hasattr(rep, "wasxfail"):
        store.append("xfail")
    elif rep.passed:
        store.append("pass")
    elif rep.failed:
        store.append("fail")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = getattr(config, "_criterion_outcomes", None)
    if not outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA_TITLES):
        title = _CRITERIA_TITLES[n]
        note = _CRITERIA_NOTES.get(n)
        got = outcomes.get(n)
        if not got:
            line = f"criterion {n}: NOT RUN — {title}"
            if note:
                line += f" ({note})"
            tr.write_line(line, yellow=True)
        elif "fail" in got:
            tr.write_line(f"criterion {n}: FAIL — {title}", red=True)
        elif "xfail" in got and set(got) == {"xfail"}:
            tr.write_line(
                f"criterion {n}: EXPECTED FAIL — {title} ({note})", yellow=True
            )
        elif "xfail" in got:
            tr.write_line(
                f"criterion {n}: PARTIAL — {title} ({note})", yellow=True
            )
        else:
            tr.write_line(f"criterion {n}: PASS — {title}", green=True)
