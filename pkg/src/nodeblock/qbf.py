"""Prenex QBFs with a CNF matrix: QDIMACS I/O, brute-force evaluation,
normalization to the alternating ∃∀ 3CNF shape, random generation."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import FormatError, FormulaError


class Quantifier(enum.Enum):
    EXISTS = "e"
    FORALL = "a"

    @property
    def other(self) -> "Quantifier":
        return Quantifier.FORALL if self is Quantifier.EXISTS else Quantifier.EXISTS

    def __str__(self) -> str:
        return "∃" if self is Quantifier.EXISTS else "∀"


EXISTS = Quantifier.EXISTS
FORALL = Quantifier.FORALL


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def value(self, assignment) -> bool:
        return assignment[self.var] != self.negated

    def __str__(self) -> str:
        return f"¬x{self.var}" if self.negated else f"x{self.var}"


@dataclass(frozen=True, eq=False)
class QbfFormula:
    prefix: tuple  # of (Quantifier, var)
    clauses: tuple  # of tuples of Literal
    n: int

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple((q, int(v)) for q, v in self.prefix))
        object.__setattr__(
            self, "clauses", tuple(tuple(c) for c in self.clauses)
        )
        vars_ = [v for _, v in self.prefix]
        if sorted(vars_) != list(range(1, self.n + 1)):
            raise FormulaError(
                "bad-prefix", "prefix must quantify each of 1..n exactly once"
            )
        for c in self.clauses:
            for lit in c:
                if not 1 <= lit.var <= self.n:
                    raise FormulaError(
                        "variable-out-of-range", f"literal {lit.to_int()} with n={self.n}"
                    )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QbfFormula):
            return NotImplemented
        return (self.n, self.prefix, self.clauses) == (other.n, other.prefix, other.clauses)

    def __hash__(self) -> int:
        return hash((self.n, self.prefix, self.clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def quantifier_of(self, var: int) -> Quantifier:
        for q, v in self.prefix:
            if v == var:
                return q
        raise KeyError(var)

    def __str__(self) -> str:
        head = "".join(f"{q}x{v}" for q, v in self.prefix)
        body = " ∧ ".join("(" + " ∨ ".join(map(str, c)) + ")" for c in self.clauses)
        return f"{head} {body}" if body else f"{head} ⊤"


def is_restricted(q: QbfFormula) -> bool:
    """∃ first, strictly alternating, x_i bound at position i, even n, 3CNF."""
    if q.n % 2 or q.n == 0:
        return False
    for i, (quant, v) in enumerate(q.prefix):
        if v != i + 1 or quant is not (EXISTS if i % 2 == 0 else FORALL):
            return False
    return all(len(c) == 3 for c in q.clauses)


@dataclass(frozen=True, eq=False)
class RestrictedQbf(QbfFormula):
    def __post_init__(self):
        super().__post_init__()
        if not is_restricted(self):
            raise FormulaError("not-restricted", str(self))

    @classmethod
    def of(cls, q: QbfFormula) -> "RestrictedQbf":
        if isinstance(q, RestrictedQbf):
            return q
        return cls(q.prefix, q.clauses, q.n)


def alternating_prefix(n: int) -> tuple:
    return tuple((EXISTS if i % 2 else FORALL, i) for i in range(1, n + 1))


# --- QDIMACS ---------------------------------------------------------------


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError("malformed-line", " ".join(tokens), lineno) from None


def parse_qdimacs(text: str) -> QbfFormula:
    """Parse QDIMACS text.

    Variables in 1..n that no quantifier line binds are treated as
    existential and placed in an outermost block, in increasing order.
    """
    n = m = None
    blocks: list[tuple[Quantifier, list[int]]] = []
    clauses: list[tuple[Literal, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        head = tokens[0]
        if head == "p":
            if n is not None:
                raise FormatError("malformed-problem-line", "second problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise FormatError("malformed-problem-line", raw.strip(), lineno)
            try:
                n, m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise FormatError("malformed-problem-line", raw.strip(), lineno) from None
            if n < 0 or m < 0:
                raise FormatError("malformed-problem-line", raw.strip(), lineno)
            continue
        if n is None:
            raise FormatError("malformed-problem-line", "missing 'p cnf' line", lineno)
        if head in ("e", "a"):
            if clauses:
                raise FormatError("malformed-line", "quantifier after clauses", lineno)
            nums = _ints(tokens[1:], lineno)
            if not nums or nums[-1] != 0 or 0 in nums[:-1]:
                raise FormatError("quantifier-not-terminated", raw.strip(), lineno)
            for v in nums[:-1]:
                if not 1 <= v <= n:
                    raise FormatError("variable-out-of-range", str(v), lineno)
            blocks.append((Quantifier(head), nums[:-1]))
            continue
        nums = _ints(tokens, lineno)
        if nums[-1] != 0:
            raise FormatError("clause-not-terminated", raw.strip(), lineno)
        if 0 in nums[:-1]:
            raise FormatError("malformed-line", "0 inside clause", lineno)
        for lit in nums[:-1]:
            if not 1 <= abs(lit) <= n:
                raise FormatError("variable-out-of-range", str(lit), lineno)
        clauses.append(tuple(Literal.from_int(x) for x in nums[:-1]))
    if n is None:
        raise FormatError("malformed-problem-line", "missing 'p cnf' line")
    if len(clauses) != m:
        raise FormatError("clause-count-mismatch", f"header says {m}, found {len(clauses)}")
    bound: set[int] = set()
    prefix = []
    for quant, vs in blocks:
        for v in vs:
            if v in bound:
                raise FormatError("duplicate-quantifier", f"variable {v} bound twice")
            bound.add(v)
            prefix.append((quant, v))
    free = [(EXISTS, v) for v in range(1, n + 1) if v not in bound]
    return QbfFormula(tuple(free + prefix), tuple(clauses), n)


def serialize_qdimacs(q: QbfFormula, comment: Optional[str] = None) -> str:
    lines = [f"c {comment}" if comment else "c nodeblock qbf"]
    lines.append(f"p cnf {q.n} {q.m}")
    block: list = []
    for quant, v in q.prefix:
        if block and block[0] is not quant:
            lines.append(" ".join([block[0].value, *map(str, block[1:]), "0"]))
            block = []
        if not block:
            block = [quant]
        block.append(v)
    if block:
        lines.append(" ".join([block[0].value, *map(str, block[1:]), "0"]))
    for c in q.clauses:
        lines.append(" ".join([*(str(l.to_int()) for l in c), "0"]))
    return "\n".join(lines) + "\n"


# --- evaluation ------------------------------------------------------------


def _matrix_true(clauses, assignment) -> bool:
    return all(any(l.value(assignment) for l in c) for c in clauses)


def evaluate(q: QbfFormula) -> bool:
    """Truth value by expanding the prefix in order (2^n leaves worst case)."""
    assignment: dict[int, bool] = {}
    prefix = q.prefix
    clauses = q.clauses

    def rec(k: int) -> bool:
        if k == len(prefix):
            return _matrix_true(clauses, assignment)
        quant, v = prefix[k]
        for value in (True, False):
            assignment[v] = value
            r = rec(k + 1)
            if quant is EXISTS and r:
                return True
            if quant is FORALL and not r:
                return False
        return quant is FORALL

    try:
        return rec(0)
    finally:
        assignment.clear()


# --- normalization ---------------------------------------------------------


@dataclass(frozen=True)
class VariableMap:
    """How normalization renumbered variables.

    ``renamed`` lists only variables whose index changed; ``dummies`` are
    fresh variables absent from the matrix.
    """

    renamed: dict = field(default_factory=dict)
    dummies: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.renamed and not self.dummies


def normalize_restricted(q: QbfFormula) -> tuple[RestrictedQbf, VariableMap]:
    """Repair the prefix and pad clauses so the result is restricted.

    Clauses shorter than three repeat their last literal; quantifier runs
    are broken by dummy variables of the missing kind, a leading ∀ gets a
    dummy ∃ in front, and an odd count gets a trailing dummy ∀. Variables
    are renumbered to their prefix position. Truth value is unchanged.
    """
    for c in q.clauses:
        if len(c) > 3:
            raise FormulaError("clause-too-wide", f"{len(c)} literals")
        if not c:
            raise FormulaError("empty-clause", "cannot pad a clause with no literals")
    slots: list[Optional[int]] = []  # original var or None for a dummy
    expected = EXISTS
    for quant, v in q.prefix:
        while quant is not expected:
            slots.append(None)
            expected = expected.other
        slots.append(v)
        expected = expected.other
    if len(slots) % 2 or not slots:
        slots.append(None)
        if len(slots) % 2:
            slots.append(None)
    new_index = {v: i + 1 for i, v in enumerate(slots) if v is not None}
    dummies = tuple(i + 1 for i, v in enumerate(slots) if v is None)
    new_clauses = []
    for c in q.clauses:
        lits = [Literal(new_index[l.var], l.negated) for l in c]
        while len(lits) < 3:
            lits.append(lits[-1])
        new_clauses.append(tuple(lits))
    out = RestrictedQbf(alternating_prefix(len(slots)), tuple(new_clauses), len(slots))
    renamed = {v: i for v, i in new_index.items() if v != i}
    return out, VariableMap(renamed, dummies)


# --- generation ------------------------------------------------------------


def random_formula(n_vars: int, m_clauses: int, seed: int) -> RestrictedQbf:
    """Alternating ∃∀ prefix, ``m_clauses`` clauses of 3 uniform literals."""
    if n_vars < 2 or n_vars % 2 or m_clauses < 0:
        raise FormulaError(
            "invalid-parameters", f"n={n_vars} must be even and >= 2, m={m_clauses} >= 0"
        )
    rng = random.Random(seed)
    clauses = []
    for _ in range(m_clauses):
        clauses.append(
            tuple(
                Literal(rng.randint(1, n_vars), bool(rng.getrandbits(1)))
                for _ in range(3)
            )
        )
    return RestrictedQbf(alternating_prefix(n_vars), tuple(clauses), n_vars)


def formula(prefix: Sequence, clauses: Sequence[Sequence[int]], n: Optional[int] = None) -> QbfFormula:
    """Convenience constructor: ``formula("eaea", [[2, -3, 4], ...])``."""
    if isinstance(prefix, str):
        prefix = [(Quantifier(c), i + 1) for i, c in enumerate(prefix)]
    n = len(prefix) if n is None else n
    cls = tuple(tuple(Literal.from_int(x) for x in c) for c in clauses)
    q = QbfFormula(tuple(prefix), cls, n)
    return RestrictedQbf.of(q) if is_restricted(q) else q
