"""Exit criteria. Each test records one PASS/FAIL line, shown in the
terminal summary under "acceptance criteria"."""

import random
import subprocess
import sys
import time

from nodeblock.digraph import validate_dag
from nodeblock.errors import ResourceExhausted
from nodeblock.game import apply_move, legal_moves
from nodeblock.harness import gadget_suite
from nodeblock.qbf import evaluate, formula, random_formula, serialize_qdimacs
from nodeblock.reduction import build_component, build_game
from nodeblock.solver import Outcome, SolveLimits, solve

from conftest import ACCEPTANCE_RESULTS, EXAMPLE_CLAUSES
from oracles import enumerate_qbf, random_dag, random_state


def record(crit, ok, detail):
    ACCEPTANCE_RESULTS.append((crit, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {crit}: {detail}")
    assert ok, detail


def test_1_gadget_owner_wins():
    details, ok = [], True
    for i in (1, 2):
        s = build_component(i, prefix="").arrival_state()
        t0 = time.perf_counter()
        rep = solve(s, SolveLimits(max_states=10**5))
        dt = time.perf_counter() - t0
        ok &= rep.outcome is Outcome.WIN and dt < 1.0 and rep.states_visited < 10**5
        details.append(f"{'white' if i == 1 else 'black'}: {rep.outcome.value} for "
                       f"{s.to_move.value} in {dt:.3f}s/{rep.states_visited} states")
    record(1, ok, "; ".join(details))


def test_2_scripted_replays():
    wanted = ["white-choice-x", "white-choice-y", "black-choice-v7", "black-choice-s",
              "fig3ab-wrong-move-x", "fig3c-black-blocked"]
    results = {r.name: r for r in gadget_suite()}
    bad = [n for n in wanted if not results[n].passed]
    record(2, not bad, f"{len(wanted) - len(bad)}/{len(wanted)} scenarios exact"
           + (f"; failed {bad}" if bad else ""))


def test_3_memo_vs_plain_dfs():
    rng = random.Random(20240501)
    t0 = time.perf_counter()
    agree = 0
    for _ in range(500):
        s = random_state(rng, random_dag(rng, max_vertices=8), max_tokens=5)
        a = solve(s, SolveLimits(memoize=True)).outcome
        b = solve(s, SolveLimits(memoize=False)).outcome
        agree += a is b
    dt = time.perf_counter() - t0
    record(3, agree == 500 and dt < 60, f"{agree}/500 agree in {dt:.2f}s")


def test_4_reduction_n2():
    agree, worst = 0, 0.0
    for k in range(200):
        q = random_formula(2, 1 + k % 3, 7000 + k)
        truth = evaluate(q)
        assert truth == enumerate_qbf(
            [(quant.value, v) for quant, v in q.prefix],
            [[l.to_int() for l in c] for c in q.clauses])
        t0 = time.perf_counter()
        rep = solve(build_game(q).state)
        worst = max(worst, time.perf_counter() - t0)
        agree += truth == (rep.outcome is Outcome.WIN)
    record(4, agree == 200 and worst <= 5.0,
           f"{agree}/200 agree, slowest instance {worst:.3f}s")


def test_5_reduction_worked_example():
    q = formula("eaea", EXAMPLE_CLAUSES)
    truth = enumerate_qbf([("e", 1), ("a", 2), ("e", 3), ("a", 4)], EXAMPLE_CLAUSES)
    assert truth is False and evaluate(q) is False
    art = build_game(q)
    assert len(art.graph.vertices) == 41
    t0 = time.perf_counter()
    try:
        rep = solve(art.state, SolveLimits(max_states=10**8))
    except ResourceExhausted as e:
        record(5, False, f"resource-exhausted after {e.states_visited} states")
        return
    dt = time.perf_counter() - t0
    ok = rep.outcome is Outcome.LOSS and dt < 600
    record(5, ok, f"formula false, game {rep.outcome.value} for W, "
           f"{rep.states_visited} states, {dt:.1f}s")


def test_6_size_law(tmp_path):
    from nodeblock.cli import main
    import io
    rows, ok = [], True
    for n, m in ((2, 1), (4, 3), (6, 5)):
        src = tmp_path / f"f{n}.qdimacs"
        src.write_text(serialize_qdimacs(random_formula(n, m, 31 * n + m)))
        out = io.StringIO()
        code = main(["reduce", str(src), "-o", str(tmp_path / f"g{n}.nbg")], out=out)
        fields = dict(line.split(": ") for line in out.getvalue().splitlines())
        got = tuple(int(fields[k]) for k in ("vertices", "white", "black", "empty"))
        want = (9 * n + m + 2, 4 * n + 1, 4 * n + m, n + 1)
        ok &= code == 0 and got == want
        rows.append(f"(n={n},m={m}) {got}")
    record(6, ok, "; ".join(rows))


def test_7_game_invariants():
    rng = random.Random(77)
    violations, playouts, compiled = 0, 0, 0
    for k in range(1000):
        if k % 2:
            g = random_dag(rng)
            s = random_state(rng, g)
        else:
            n = rng.choice((2, 4, 6))
            art = build_game(random_formula(n, rng.randint(1, 5), rng.getrandbits(32)))
            s, g = art.state, art.graph
            compiled += 1
        order = validate_dag(g)  # raises on a cyclic compiled graph
        rank = {v: i for i, v in enumerate(order)}
        bound = (len(s.white) + len(s.black)) * (len(g.vertices) - 1)
        length = 0
        while True:
            moves = legal_moves(s)
            if not moves:
                break
            m = rng.choice(moves)
            violations += rank[m.dst] <= rank[m.src]
            s = apply_move(s, m)
            length += 1
        violations += length > bound
        playouts += 1
    record(7, violations == 0,
           f"{playouts} playouts ({compiled} compiled), {violations} violations")


def test_8_batch_determinism():
    base = [sys.executable, "-m", "nodeblock", "verify",
            "--n", "2", "--m", "2", "--count", "50", "--seed", "123"]
    runs = [subprocess.run(base + extra, capture_output=True)
            for extra in ([], [], ["--workers", "4"])]
    outs = {r.stdout for r in runs}
    ok = all(r.returncode == 0 for r in runs) and len(outs) == 1
    summary = runs[0].stdout.decode().strip().splitlines()[-1]
    record(8, ok, f"3 runs (1 with 4 workers) byte-identical={len(outs) == 1}; {summary}")
