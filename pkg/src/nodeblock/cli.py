"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 format error, 3 resource limit,
4 verification disagreement (or a failing gadget scenario).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, TextIO

from .errors import FormatError, FormulaError, NodeBlockError, ResourceExhausted
from .game import GameState, Move, Player, apply_move, legal_moves
from .harness import (
    BatchConfig,
    EXHAUSTED,
    gadget_suite,
    parse_instance,
    serialize_instance,
    verify_batch,
    verify_instance,
)
from .qbf import (
    evaluate,
    is_restricted,
    normalize_restricted,
    parse_qdimacs,
    random_formula,
    serialize_qdimacs,
)
from .reduction import build_game
from .solver import SolveLimits, principal_variation, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_LIMIT = 3
EXIT_DISAGREE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _limits(args) -> SolveLimits:
    if args.max_states is not None and args.max_states < 1:
        raise UsageError("--max-states must be >= 1")
    return SolveLimits(max_states=args.max_states, memoize=not getattr(args, "no_memo", False))


def cmd_solve(args, out: TextIO) -> int:
    s = parse_instance(_read(args.file))
    limits = _limits(args)
    rep = solve(s, limits)
    out.write(f"outcome: {rep.outcome.value} for {s.to_move.value}\n")
    if args.pv:
        pv = principal_variation(s, limits)
        out.write("pv:" + "".join(f" {m.arrow}" for m in pv) + "\n")
    out.write(f"states: {rep.states_visited}\n")
    return EXIT_OK


def cmd_reduce(args, out: TextIO) -> int:
    q = parse_qdimacs(_read(args.file))
    if not is_restricted(q):
        q, vmap = normalize_restricted(q)
        if vmap.dummies:
            out.write("dummies: " + " ".join(f"x{d}" for d in vmap.dummies) + "\n")
        for old, new in sorted(vmap.renamed.items()):
            out.write(f"renamed: x{old} -> x{new}\n")
    art = build_game(q)
    s = art.state
    _write(args.output, serialize_instance(s))
    if args.labels:
        _write(args.labels, art.label_map_text())
    out.write(f"n: {art.n}\nm: {art.m}\n")
    out.write(f"vertices: {len(art.graph.vertices)}\n")
    out.write(f"arcs: {len(art.graph.arcs)}\n")
    out.write(f"white: {len(s.white)}\nblack: {len(s.black)}\nempty: {len(s.empty)}\n")
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    q = parse_qdimacs(_read(args.file))
    out.write("true\n" if evaluate(q) else "false\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    limits = _limits(args)
    if args.qdimacs:
        if any(x is not None for x in (args.n, args.m, args.count, args.seed)):
            raise UsageError("--qdimacs excludes --n/--m/--count/--seed")
        rep = verify_instance(parse_qdimacs(_read(args.qdimacs)), limits)
        out.write(f"formula: {'true' if rep.formula_value else 'false'}\n")
        out.write(f"vertices: {rep.vertices}\n")
        if rep.status == EXHAUSTED:
            out.write(f"status: {EXHAUSTED}\nstates: {rep.states_visited}\n")
            return EXIT_LIMIT
        out.write(f"game: {rep.game_outcome.value} for W\n")
        out.write(f"agree: {'yes' if rep.agree else 'NO'}\n")
        out.write(f"states: {rep.states_visited}\n")
        return EXIT_OK if rep.agree else EXIT_DISAGREE
    if args.n is None or args.m is None:
        raise UsageError("verify needs --qdimacs or --n and --m")
    try:
        cfg = BatchConfig(args.n, args.m, 1 if args.count is None else args.count,
                          0 if args.seed is None else args.seed, limits)
    except NodeBlockError as e:
        raise UsageError(str(e)) from None
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    report = verify_batch(cfg, workers=args.workers)
    out.write(report.render())
    if report.disagree:
        return EXIT_DISAGREE
    if report.exhausted:
        return EXIT_LIMIT
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    try:
        q = random_formula(args.n, args.m, args.seed)
    except FormulaError as e:
        raise UsageError(str(e)) from None
    _write(args.output, serialize_qdimacs(q, f"random n={args.n} m={args.m} seed={args.seed}"))
    return EXIT_OK


def cmd_gadgets(args, out: TextIO) -> int:
    results = gadget_suite()
    for r in results:
        out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_DISAGREE


# --- play REPL -------------------------------------------------------------


def _show(s: GameState, out: TextIO) -> None:
    out.write(f"W: {' '.join(sorted(s.white)) or '-'}\n")
    out.write(f"B: {' '.join(sorted(s.black)) or '-'}\n")
    out.write(f"empty: {' '.join(sorted(s.empty)) or '-'}\n")
    out.write(f"to move: {s.to_move.value}\n")


def _show_moves(s: GameState, out: TextIO) -> None:
    moves = legal_moves(s)
    out.write("moves:" + "".join(f" {m.arrow}" for m in moves) + "\n")


def play(s: GameState, human: Player, inp: TextIO, out: TextIO,
         limits: Optional[SolveLimits] = None) -> int:
    """Human vs solver. Returns the exit code."""
    history: list[GameState] = []

    def engine_turns():
        nonlocal s
        while s.to_move is not human and legal_moves(s):
            rep = solve(s, limits)
            out.write(f"engine: {rep.best.arrow}\n")
            history.append(s)
            s = apply_move(s, rep.best)

    def game_over() -> bool:
        if legal_moves(s):
            return False
        out.write(f"{s.to_move.value} cannot move; {s.to_move.opponent.value} wins\n")
        return True

    engine_turns()
    _show(s, out)
    if game_over():
        return EXIT_OK
    _show_moves(s, out)
    while True:
        out.write("> ")
        out.flush()
        line = inp.readline()
        if not line:
            return EXIT_OK
        parts = line.split()
        if not parts:
            continue
        cmd = parts[0]
        if cmd == "quit":
            return EXIT_OK
        if cmd == "moves":
            _show_moves(s, out)
        elif cmd == "hint":
            rep = solve(s, limits)
            out.write(f"hint: {rep.best.arrow} ({rep.outcome.value} for {s.to_move.value})\n")
        elif cmd == "undo":
            # rewind to the human's previous turn
            while history:
                s = history.pop()
                if s.to_move is human:
                    break
            _show(s, out)
        elif cmd == "move" and len(parts) == 3:
            m = Move(parts[1], parts[2], human)
            if m not in legal_moves(s):
                out.write(f"illegal move: {parts[1]}->{parts[2]}\n")
                continue
            history.append(s)
            s = apply_move(s, m)
            if game_over():
                return EXIT_OK
            engine_turns()
            _show(s, out)
            if game_over():
                return EXIT_OK
        else:
            out.write("commands: move <from> <to> | moves | hint | undo | quit\n")


def cmd_play(args, out: TextIO) -> int:
    s = parse_instance(_read(args.file))
    return play(s, Player(args.human), sys.stdin, out, _limits(args))


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nodeblock", description="Node blocking on DAGs: solver, QBF reduction, checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def limit_opt(sp):
        sp.add_argument("--max-states", type=int, default=None, metavar="N")

    sp = sub.add_parser("solve", help="solve an NBG instance")
    sp.add_argument("file")
    sp.add_argument("--pv", action="store_true", help="print the principal variation")
    sp.add_argument("--no-memo", action="store_true", help="plain depth-first search")
    limit_opt(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("reduce", help="compile a QDIMACS formula into an NBG instance")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--labels", help="write the role-label map here")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("eval", help="brute-force truth value of a QDIMACS formula")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", help="check formula truth against the compiled game")
    sp.add_argument("--qdimacs")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=1)
    limit_opt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="write a random alternating 3CNF formula")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("play", help="play against the solver")
    sp.add_argument("file")
    sp.add_argument("--human", choices=("W", "B"), required=True)
    limit_opt(sp)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("gadgets", help="run the scripted gadget scenarios")
    sp.set_defaults(func=cmd_gadgets)
    return p


def main(argv=None, out: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as e:
        sys.stderr.write(f"nodeblock: {e}\n")
        return EXIT_USAGE
    except (FormatError, FormulaError) as e:
        sys.stderr.write(f"nodeblock: {e}\n")
        return EXIT_FORMAT
    except ResourceExhausted as e:
        sys.stderr.write(f"nodeblock: {e}\n")
        return EXIT_LIMIT
    except NodeBlockError as e:
        sys.stderr.write(f"nodeblock: {e}\n")
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
