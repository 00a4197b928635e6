import random

import pytest

from nodeblock.errors import FormatError
from nodeblock.game import BLACK, WHITE, apply_move, legal_moves
from nodeblock.harness import (
    COMPLETED,
    EXHAUSTED,
    BatchConfig,
    gadget_suite,
    parse_instance,
    serialize_instance,
    verify_batch,
    verify_instance,
)
from nodeblock.qbf import formula, random_formula
from nodeblock.reduction import build_game
from nodeblock.solver import Outcome, SolveLimits

from oracles import random_dag, random_state


def test_nbg_round_trip_gadget(white_gadget):
    s = white_gadget.arrival_state()
    text = serialize_instance(s)
    assert text.splitlines()[0] == "nbg 1"
    assert text.splitlines()[-1] == "turn W"
    assert parse_instance(text) == s
    assert serialize_instance(parse_instance(text)) == text


def test_nbg_round_trip_random_and_compiled():
    rng = random.Random(3)
    states = [random_state(rng, random_dag(rng)) for _ in range(200)]
    a = build_game(random_formula(4, 3, 1))
    s = a.state
    for _ in range(30):
        states.append(s)
        moves = legal_moves(s)
        if not moves:
            break
        s = apply_move(s, moves[0])
    for s in states:
        assert parse_instance(serialize_instance(s)) == s


def test_nbg_comments_and_order():
    text = """# two vertices
nbg 1
v b
v a   # trailing comment
a a b
w a
turn B
"""
    s = parse_instance(text)
    assert s.white == {"a"} and s.to_move is BLACK
    assert serialize_instance(s) == "nbg 1\nv a\nv b\na a b\nw a\nturn B\n"


@pytest.mark.parametrize(
    "text, kind",
    [
        ("nbg 1\nv a\nw a\nb a\nturn W\n", "duplicate-token"),
        ("nbg 1\nv a\nw a\n", "missing-turn"),
        ("nbg 2\nv a\nturn W\n", "bad-version"),
        ("v a\nturn W\n", "bad-version"),
        ("nbg 1\nv a\na a b\nturn W\n", "unknown-vertex"),
        ("nbg 1\nv a\nw c\nturn W\n", "unknown-vertex"),
        ("nbg 1\nv a\nturn X\n", "malformed-line"),
    ],
)
def test_nbg_errors(text, kind):
    with pytest.raises(FormatError) as exc:
        parse_instance(text)
    assert exc.value.kind == kind


def test_verify_small_true():
    rep = verify_instance(formula("ea", [[1, 1, 1]]))
    assert rep.status == COMPLETED
    assert rep.vertices == 21
    assert rep.formula_value is True
    assert rep.game_outcome is Outcome.WIN
    assert rep.agree is True


def test_verify_normalizes():
    # ∀x1 (x1) is false; normalization prepends a dummy ∃
    rep = verify_instance(formula("a", [[1]]))
    assert rep.formula_value is False and rep.game_outcome is Outcome.LOSS and rep.agree


def test_verify_exhausted():
    rep = verify_instance(formula("ea", [[1, 1, 1]]), SolveLimits(max_states=1))
    assert rep.status == EXHAUSTED and rep.agree is None and rep.game_outcome is None


def test_batch_determinism():
    cfg = BatchConfig(2, 1, 5, 9)
    a, b = verify_batch(cfg).render(), verify_batch(cfg).render()
    assert a == b
    assert verify_batch(cfg, workers=3).render() == a
    assert "disagree=0" in a


def test_batch_empty():
    rep = verify_batch(BatchConfig(2, 1, 0, 9))
    assert rep.rows == () and (rep.agree, rep.disagree, rep.exhausted) == (0, 0, 0)


def test_batch_invalid():
    with pytest.raises(Exception):
        BatchConfig(3, 1, 1, 1)


def test_gadget_suite_all_pass():
    results = gadget_suite()
    assert len(results) == 9
    failed = [r for r in results if not r.passed]
    assert not failed, failed
    by_name = {r.name: r for r in results}
    assert by_name["white-choice-x"].detail == "W{t,v1,v4,y} B{v2,v3} empty{s,x}"
    assert by_name["fig3c-black-blocked"].detail == "black legal moves=0"
    assert by_name["black-arrival-solve"].detail.startswith("WIN for B")


def test_wrong_move_pair_inside_full_game():
    """On a true formula, Black stepping v2->v3 in the untouched white gadget
    G3 while the game is in G1 does not help: White answers v4->v2 there
    and still wins."""
    from nodeblock.game import replay, script
    from nodeblock.qbf import evaluate
    from nodeblock.solver import solve
    q = random_formula(4, 3, 1003)
    assert evaluate(q) is True
    a = build_game(q)
    assert solve(a.state).outcome is Outcome.WIN
    tr = replay(a.state, script(WHITE, "G1.v4->G1.t", "G3.v2->G3.v3", "G3.v4->G3.v2"))
    assert tr.final.to_move is BLACK
    assert solve(tr.final).outcome is Outcome.LOSS
