import random

import pytest
from hypothesis import given, settings, strategies as st

from nodeblock.errors import FormatError, FormulaError
from nodeblock.qbf import (
    EXISTS,
    FORALL,
    Literal,
    evaluate,
    formula,
    is_restricted,
    normalize_restricted,
    parse_qdimacs,
    random_formula,
    serialize_qdimacs,
)

from conftest import EXAMPLE_CLAUSES
from oracles import enumerate_qbf

EXAMPLE_QDIMACS = """c worked example
p cnf 4 3
e 1 0
a 2 0
e 3 0
a 4 0
2 -3 4 0
1 2 -4 0
-1 -2 4 0
"""


def _oracle(q):
    prefix = [(quant.value, v) for quant, v in q.prefix]
    clauses = [[l.to_int() for l in c] for c in q.clauses]
    return enumerate_qbf(prefix, clauses)


def test_parse_minimal():
    q = parse_qdimacs("p cnf 1 1\ne 1 0\n1 1 1 0\n")
    assert (q.n, q.m) == (1, 1)
    assert q.prefix == ((EXISTS, 1),)
    assert q.clauses == ((Literal(1),) * 3,)


def test_parse_example():
    q = parse_qdimacs(EXAMPLE_QDIMACS)
    assert (q.n, q.m) == (4, 3)
    assert [quant for quant, _ in q.prefix] == [EXISTS, FORALL, EXISTS, FORALL]
    assert [[l.to_int() for l in c] for c in q.clauses] == EXAMPLE_CLAUSES
    assert is_restricted(q)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("p cnf 1 1\ne 1 0\n1 1 1\n", "clause-not-terminated"),
        ("p cnf x 1\n", "malformed-problem-line"),
        ("p dnf 1 1\n", "malformed-problem-line"),
        ("e 1 0\n", "malformed-problem-line"),
        ("p cnf 1 1\ne 1 0\n2 0\n", "variable-out-of-range"),
        ("p cnf 1 2\ne 1 0\n1 0\n", "clause-count-mismatch"),
        ("p cnf 1 0\ne 2 0\n", "variable-out-of-range"),
        ("p cnf 2 0\ne 1 0\na 1 0\n", "duplicate-quantifier"),
    ],
)
def test_parse_errors(text, kind):
    with pytest.raises(FormatError) as exc:
        parse_qdimacs(text)
    assert exc.value.kind == kind


def test_free_variables_are_outer_existentials():
    q = parse_qdimacs("p cnf 3 1\na 2 0\n1 2 3 0\n")
    assert q.prefix == ((EXISTS, 1), (EXISTS, 3), (FORALL, 2))


def test_evaluate_basics():
    assert evaluate(formula("e", [[1, 1, 1]])) is True
    assert evaluate(formula("a", [[1, 1, 1]])) is False


def test_example_is_false(example_formula):
    assert _oracle(example_formula) is False
    assert evaluate(example_formula) is False


def _random_qbf(rng, n, m, width=3):
    order = list(range(1, n + 1))
    rng.shuffle(order)
    prefix = [(rng.choice((EXISTS, FORALL)), v) for v in order]
    clauses = [
        [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, width))]
        for _ in range(m)
    ]
    return formula(prefix, clauses, n)


def test_evaluate_matches_enumeration():
    rng = random.Random(5)
    for _ in range(400):
        q = _random_qbf(rng, rng.randint(1, 4), rng.randint(0, 5))
        assert evaluate(q) == _oracle(q)


def test_normalize_idempotent(example_formula):
    out, vmap = normalize_restricted(example_formula)
    assert out == example_formula
    assert vmap.is_empty


def test_normalize_leading_forall():
    q = formula("a", [[1, 1, 1]])
    out, vmap = normalize_restricted(q)
    assert [quant for quant, _ in out.prefix] == [EXISTS, FORALL]
    assert vmap.dummies == (1,)
    assert vmap.renamed == {1: 2}
    assert evaluate(q) is False and evaluate(out) is False


def test_normalize_odd_count():
    q = formula("e", [[1, 1, 1]])
    out, vmap = normalize_restricted(q)
    assert out.n == 2 and vmap.dummies == (2,)
    assert evaluate(q) is True and evaluate(out) is True


def test_normalize_pads_short_clauses():
    out, _ = normalize_restricted(formula("ea", [[1], [-2, 1]]))
    assert [[l.to_int() for l in c] for c in out.clauses] == [[1, 1, 1], [-2, 1, 1]]


def test_normalize_rejects_wide_clause():
    with pytest.raises(FormulaError) as exc:
        normalize_restricted(formula("ea", [[1, 2, -1, -2]]))
    assert exc.value.kind == "clause-too-wide"


def test_normalize_preserves_truth():
    rng = random.Random(99)
    for _ in range(200):
        q = _random_qbf(rng, rng.randint(1, 5), rng.randint(1, 4))
        out, vmap = normalize_restricted(q)
        assert is_restricted(out)
        used = {l.var for c in out.clauses for l in c}
        assert not used & set(vmap.dummies)
        assert evaluate(out) == evaluate(q) == _oracle(q)


def test_random_formula_contract():
    assert random_formula(2, 1, 42) == random_formula(2, 1, 42)
    q = random_formula(2, 3, 7)
    assert q.m == 3 and all(len(c) == 3 for c in q.clauses)
    assert all(l.var in (1, 2) for c in q.clauses for l in c)
    assert is_restricted(q)
    with pytest.raises(FormulaError):
        random_formula(3, 1, 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6), st.integers(0, 10**6))
def test_qdimacs_round_trip(n, m, seed):
    q = _random_qbf(random.Random(seed), n, m)
    text = serialize_qdimacs(q)
    assert parse_qdimacs(text) == q
    assert serialize_qdimacs(parse_qdimacs(text)) == text
