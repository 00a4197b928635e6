import pytest

from nodeblock.qbf import formula
from nodeblock.reduction import build_component

# (criterion, passed, detail) rows filled by test_acceptance
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {crit}: {detail}")


# ∃x1 ∀x2 ∃x3 ∀x4 (x2 ∨ ¬x3 ∨ x4)(x1 ∨ x2 ∨ ¬x4)(¬x1 ∨ ¬x2 ∨ x4)
EXAMPLE_CLAUSES = [[2, -3, 4], [1, 2, -4], [-1, -2, 4]]


@pytest.fixture
def example_formula():
    return formula("eaea", EXAMPLE_CLAUSES)


@pytest.fixture
def white_gadget():
    return build_component(1, prefix="")


@pytest.fixture
def black_gadget():
    return build_component(2, prefix="")
