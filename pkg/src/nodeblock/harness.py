"""Reduction verification, gadget replays, and the NBG instance format."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .digraph import build_graph
from .errors import FormatError, NodeBlockError, ResourceExhausted
from .game import BLACK, WHITE, GameState, Player, apply_move, legal_moves, replay, script
from .qbf import QbfFormula, evaluate, is_restricted, normalize_restricted, random_formula
from .reduction import build_component, build_game
from .solver import Outcome, SolveLimits, SolveReport, solve

NBG_VERSION = "1"

# --- NBG text format -------------------------------------------------------


def serialize_instance(s: GameState) -> str:
    lines = [f"nbg {NBG_VERSION}"]
    g = s.graph
    lines += [f"v {v}" for v in g.sorted_vertices()]
    lines += [f"a {u} {v}" for u, v in g.sorted_arcs()]
    lines += [f"w {v}" for v in sorted(s.white)]
    lines += [f"b {v}" for v in sorted(s.black)]
    lines.append(f"turn {s.to_move.value}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> GameState:
    header_seen = False
    vertices: list[str] = []
    declared: set[str] = set()
    arcs: list[tuple[str, str]] = []
    tokens: dict[str, Player] = {}
    turn: Optional[Player] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header_seen:
            if parts != ["nbg", NBG_VERSION]:
                raise FormatError("bad-version", f"expected 'nbg {NBG_VERSION}', got {line!r}", lineno)
            header_seen = True
            continue
        tag, args = parts[0], parts[1:]
        if tag == "v" and len(args) == 1:
            if args[0] in declared:
                raise FormatError("duplicate-vertex", args[0], lineno)
            declared.add(args[0])
            vertices.append(args[0])
        elif tag == "a" and len(args) == 2:
            for x in args:
                if x not in declared:
                    raise FormatError("unknown-vertex", x, lineno)
            arcs.append((args[0], args[1]))
        elif tag in ("w", "b") and len(args) == 1:
            v = args[0]
            if v not in declared:
                raise FormatError("unknown-vertex", v, lineno)
            if v in tokens:
                raise FormatError("duplicate-token", v, lineno)
            tokens[v] = WHITE if tag == "w" else BLACK
        elif tag == "turn" and len(args) == 1 and args[0] in ("W", "B"):
            if turn is not None:
                raise FormatError("duplicate-turn", line, lineno)
            turn = Player(args[0])
        else:
            raise FormatError("malformed-line", line, lineno)
    if not header_seen:
        raise FormatError("bad-version", "missing 'nbg' header")
    if turn is None:
        raise FormatError("missing-turn", "no 'turn' line")
    try:
        g = build_graph(vertices, arcs)
    except NodeBlockError as e:
        raise FormatError("bad-graph", str(e)) from None
    white = frozenset(v for v, p in tokens.items() if p is WHITE)
    black = frozenset(v for v, p in tokens.items() if p is BLACK)
    return GameState(g, white, black, turn)


# --- verification ----------------------------------------------------------

COMPLETED = "completed"
EXHAUSTED = "resource-exhausted"


@dataclass(frozen=True)
class VerifyReport:
    formula_value: bool
    game_outcome: Optional[Outcome]  # for White, who moves first
    agree: Optional[bool]
    solver_stats: Optional[SolveReport]
    status: str
    states_visited: int
    vertices: int


def verify_instance(q: QbfFormula, limits: Optional[SolveLimits] = None) -> VerifyReport:
    """Compare the formula's truth value with the outcome of its game."""
    if not is_restricted(q):
        q, _ = normalize_restricted(q)
    value = evaluate(q)
    art = build_game(q)
    nv = len(art.graph.vertices)
    try:
        rep = solve(art.state, limits)
    except ResourceExhausted as e:
        return VerifyReport(value, None, None, None, EXHAUSTED, e.states_visited, nv)
    agree = value == (rep.outcome is Outcome.WIN)
    return VerifyReport(value, rep.outcome, agree, rep, COMPLETED, rep.states_visited, nv)


@dataclass(frozen=True)
class BatchConfig:
    n: int
    m: int
    instances: int
    seed: int
    per_instance_limits: SolveLimits = field(default_factory=SolveLimits)

    def __post_init__(self):
        if self.n < 2 or self.n % 2 or self.m < 0 or self.instances < 0:
            raise NodeBlockError(
                f"invalid-parameters: n={self.n} (even, >=2), m={self.m}, instances={self.instances}"
            )


@dataclass(frozen=True)
class BatchRow:
    index: int
    seed: int
    formula_value: bool
    outcome: Optional[Outcome]
    agree: Optional[bool]
    status: str
    states_visited: int


@dataclass(frozen=True)
class BatchReport:
    config: BatchConfig
    rows: tuple

    @property
    def agree(self) -> int:
        return sum(1 for r in self.rows if r.agree is True)

    @property
    def disagree(self) -> int:
        return sum(1 for r in self.rows if r.agree is False)

    @property
    def exhausted(self) -> int:
        return sum(1 for r in self.rows if r.status == EXHAUSTED)

    def render(self) -> str:
        c = self.config
        cap = c.per_instance_limits.max_states
        lines = [
            f"verify n={c.n} m={c.m} count={c.instances} seed={c.seed} "
            f"max_states={'none' if cap is None else cap}"
        ]
        for r in self.rows:
            lines.append(
                f"instance {r.index} seed={r.seed} formula={'true' if r.formula_value else 'false'} "
                f"game={r.outcome.value if r.outcome else '-'} "
                f"agree={'-' if r.agree is None else 'yes' if r.agree else 'NO'} "
                f"status={r.status} states={r.states_visited}"
            )
        lines.append(f"summary agree={self.agree} disagree={self.disagree} exhausted={self.exhausted}")
        return "\n".join(lines) + "\n"


def instance_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(32) for _ in range(count)]


def _batch_row(args) -> BatchRow:
    index, seed, n, m, limits = args
    rep = verify_instance(random_formula(n, m, seed), limits)
    return BatchRow(index, seed, rep.formula_value, rep.game_outcome, rep.agree,
                    rep.status, rep.states_visited)


def verify_batch(cfg: BatchConfig, workers: int = 1) -> BatchReport:
    """Verify ``cfg.instances`` random formulas; rows stay in index order
    whatever ``workers`` is."""
    jobs = [
        (k, s, cfg.n, cfg.m, cfg.per_instance_limits)
        for k, s in enumerate(instance_seeds(cfg.seed, cfg.instances), 1)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_batch_row, jobs))
    else:
        rows = [_batch_row(j) for j in jobs]
    return BatchReport(cfg, tuple(rows))


# --- scripted gadget scenarios --------------------------------------------


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    passed: bool
    detail: str


def _occupancy_summary(s: GameState) -> str:
    return (f"W{{{','.join(sorted(s.white))}}} B{{{','.join(sorted(s.black))}}} "
            f"empty{{{','.join(sorted(s.empty))}}}")


def _expect(s: GameState, white, black, empty) -> tuple[bool, str]:
    ok = s.white == set(white) and s.black == set(black) and s.empty == set(empty)
    return ok, _occupancy_summary(s)


def white_arrival() -> GameState:
    return build_component(1, prefix="").arrival_state()


def black_arrival() -> GameState:
    return build_component(2, prefix="").arrival_state()


def fig3_arrival() -> GameState:
    """White gadget that took the wrong-move pair v2->_B v3, v4->_W v2 while
    still in its initial state, then saw t emptied; White to move."""
    init = build_component(1, prefix="").initial_state().with_turn(BLACK)
    tr = replay(init, script(BLACK, "v2->v3", "v4->v2"))
    s = tr.final
    return GameState(s.graph, s.white - {"t"}, s.black - {"t"}, WHITE)


def fig3_blocked() -> GameState:
    """White has already moved x into v4 before t emptied; White to move."""
    g = build_component(1, prefix="").graph()
    return GameState(g, frozenset({"s", "v2", "v4", "y"}), frozenset({"v1", "v3"}), WHITE)


WHITE_X_LINE = ("v4->t", "v2->v3", "x->v4", "v1->v2", "s->v1")
WHITE_Y_LINE = ("v4->t", "v2->v3", "y->v4", "v1->v2", "s->v1")
# B's s-move is played into v1, the only successor of s
BLACK_V7_LINE = ("v4->t", "v2->v3", "v5->v4", "v1->v2", "v7->v5", "x->v7", "s->v1")
BLACK_S_LINE = ("v4->t", "v2->v3", "v5->v4", "v1->v2", "s->v1")
FIG3_X_LINE = ("x->v4", "v3->t", "v2->v3", "v1->v2", "s->v1")
FIG3_Y_LINE = ("y->v4", "v3->t", "v2->v3", "v1->v2", "s->v1")


def _replay_scenario(name, start, first, line, white, black, empty) -> ScenarioResult:
    try:
        final = replay(start, script(first, *line)).final
    except NodeBlockError as e:
        return ScenarioResult(name, False, str(e))
    ok, summary = _expect(final, white, black, empty)
    return ScenarioResult(name, ok, summary)


def _solve_scenario(name, start, winner) -> ScenarioResult:
    rep = solve(start, SolveLimits(max_states=10**5))
    ok = rep.outcome is Outcome.WIN and start.to_move is winner
    return ScenarioResult(
        name, ok, f"{rep.outcome.value} for {start.to_move.value}, states={rep.states_visited}"
    )


def _blocked_scenario() -> ScenarioResult:
    s = apply_move(fig3_blocked(), script(WHITE, "v4->t")[0])
    n = len(legal_moves(s))
    return ScenarioResult("fig3c-black-blocked", n == 0 and s.to_move is BLACK,
                          f"black legal moves={n}")


SCENARIOS: tuple[Callable[[], ScenarioResult], ...] = (
    lambda: _replay_scenario("white-choice-x", white_arrival(), WHITE, WHITE_X_LINE,
                             {"t", "v4", "v1", "y"}, {"v3", "v2"}, {"s", "x"}),
    lambda: _replay_scenario("white-choice-y", white_arrival(), WHITE, WHITE_Y_LINE,
                             {"t", "v4", "v1", "x"}, {"v3", "v2"}, {"s", "y"}),
    lambda: _replay_scenario("black-choice-v7", black_arrival(), BLACK, BLACK_V7_LINE,
                             {"v3", "v2", "v7", "y"}, {"t", "v4", "v5", "v6", "v8", "v1"},
                             {"s", "x"}),
    lambda: _replay_scenario("black-choice-s", black_arrival(), BLACK, BLACK_S_LINE,
                             {"v3", "v2", "x", "y"}, {"t", "v4", "v6", "v7", "v8", "v1"},
                             {"s", "v5"}),
    lambda: _solve_scenario("white-arrival-solve", white_arrival(), WHITE),
    lambda: _solve_scenario("black-arrival-solve", black_arrival(), BLACK),
    lambda: _replay_scenario("fig3ab-wrong-move-x", fig3_arrival(), WHITE, FIG3_X_LINE,
                             {"v1", "v3", "v4", "y"}, {"t", "v2"}, {"s", "x"}),
    lambda: _replay_scenario("fig3ab-wrong-move-y", fig3_arrival(), WHITE, FIG3_Y_LINE,
                             {"v1", "v3", "v4", "x"}, {"t", "v2"}, {"s", "y"}),
    _blocked_scenario,
)


def gadget_suite() -> list[ScenarioResult]:
    """Run every scripted scenario; failures are reported, not raised."""
    out = []
    for run in SCENARIOS:
        try:
            out.append(run())
        except Exception as e:  # a broken scenario must not hide the others
            out.append(ScenarioResult(getattr(run, "__name__", "scenario"), False, repr(e)))
    return out
