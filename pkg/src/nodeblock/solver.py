"""Exact win/loss solver for node blocking on acyclic graphs.

Positions are packed into two bitmasks (white, black) over the graph's
vertices in name order, so iterating set bits low to high and each
vertex's sorted successors yields moves in lexicographic (from, to) order.
The search is an explicit-stack negamax; with memoization on, solved
positions go into a table private to the call.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Optional

from .digraph import Digraph, validate_dag
from .errors import NodeBlockError, ResourceExhausted
from .game import BLACK, WHITE, GameState, Move, Player, apply_move


class Outcome(enum.Enum):
    WIN = "WIN"  # current player has a winning strategy
    LOSS = "LOSS"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SolveLimits:
    max_states: Optional[int] = None
    memoize: bool = True

    def __post_init__(self):
        if self.max_states is not None and self.max_states < 1:
            raise NodeBlockError("max_states must be >= 1")


@dataclass(frozen=True)
class SolveReport:
    outcome: Outcome
    best: Optional[Move]
    states_visited: int
    memo_entries: int
    elapsed: float


class CompiledGraph:
    """Index form of a Digraph: vertex i is the i-th name in byte order."""

    def __init__(self, g: Digraph):
        self.graph = g
        self.names = g.sorted_vertices()
        self.index = {v: i for i, v in enumerate(self.names)}
        self.outs = tuple(
            tuple(sorted(self.index[u] for u in g._out[v])) for v in self.names
        )
        self.n = len(self.names)

    def mask(self, vertices) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.index[v]
        return m

    def vertices_of(self, mask: int) -> frozenset:
        return frozenset(self.names[i] for i in range(self.n) if mask >> i & 1)


_compiled_cache: dict = {}


def compile_graph(g: Digraph) -> CompiledGraph:
    cg = _compiled_cache.get(id(g))
    if cg is None or cg.graph is not g:
        cg = CompiledGraph(g)
        if len(_compiled_cache) > 64:
            _compiled_cache.clear()
        _compiled_cache[id(g)] = cg
    return cg


def encode_key(s: GameState) -> tuple[int, int, int]:
    """Canonical key: (white mask, black mask, mover bit)."""
    cg = compile_graph(s.graph)
    return cg.mask(s.white), cg.mask(s.black), 0 if s.to_move is WHITE else 1


def _moves(outs, mine: int, occ: int) -> list:
    moves = []
    while mine:
        low = mine & -mine
        v = low.bit_length() - 1
        mine ^= low
        for u in outs[v]:
            if not occ >> u & 1:
                moves.append((v, u))
    return moves


class _Search:
    def __init__(self, cg: CompiledGraph, limits: SolveLimits):
        self.cg = cg
        self.limit = limits.max_states
        self.memo: Optional[dict] = {} if limits.memoize else None
        self.visited = 0

    def _expand(self, w: int, b: int, p: int) -> list:
        self.visited += 1
        if self.limit is not None and self.visited > self.limit:
            raise ResourceExhausted(self.visited - 1)
        occ = w | b
        return _moves(self.cg.outs, w if p == 0 else b, occ)

    def wins(self, w: int, b: int, p: int) -> bool:
        """True iff the player to move in (w, b, p) has a winning strategy."""
        memo = self.memo
        shift = self.cg.n
        key = ((w << shift | b) << 1) | p
        if memo is not None and key in memo:
            return memo[key]
        moves = self._expand(w, b, p)
        if not moves:
            if memo is not None:
                memo[key] = False
            return False
        outs = self.cg.outs
        stack = [[w, b, p, moves, 0, key]]
        ret = None
        while stack:
            fr = stack[-1]
            if ret is not None:
                if not ret:
                    # some child loses for its mover: this node wins
                    stack.pop()
                    if memo is not None:
                        memo[fr[5]] = True
                    ret = True
                    continue
                fr[4] += 1
                ret = None
            fw, fb, fp, fmoves, i, _ = fr
            if i == len(fmoves):
                stack.pop()
                if memo is not None:
                    memo[fr[5]] = False
                ret = False
                continue
            src, dst = fmoves[i]
            bits = (1 << src) | (1 << dst)
            if fp == 0:
                cw, cb = fw ^ bits, fb
            else:
                cw, cb = fw, fb ^ bits
            cp = fp ^ 1
            ckey = ((cw << shift | cb) << 1) | cp
            if memo is not None:
                hit = memo.get(ckey)
                if hit is not None:
                    ret = hit
                    continue
            occ = cw | cb
            self.visited += 1
            if self.limit is not None and self.visited > self.limit:
                raise ResourceExhausted(self.visited - 1)
            cmoves = _moves(outs, cw if cp == 0 else cb, occ)
            if not cmoves:
                if memo is not None:
                    memo[ckey] = False
                ret = False
                continue
            stack.append([cw, cb, cp, cmoves, 0, ckey])
        return ret

    def root(self, w: int, b: int, p: int):
        """Return (wins, index of best move, move list) for a root position."""
        moves = self._expand(w, b, p)
        for i, (src, dst) in enumerate(moves):
            bits = (1 << src) | (1 << dst)
            cw, cb = (w ^ bits, b) if p == 0 else (w, b ^ bits)
            if not self.wins(cw, cb, p ^ 1):
                return True, i, moves
        return False, (0 if moves else None), moves


def _prepare(s: GameState, limits: Optional[SolveLimits]):
    validate_dag(s.graph)
    limits = limits or SolveLimits()
    cg = compile_graph(s.graph)
    p = 0 if s.to_move is WHITE else 1
    return _Search(cg, limits), cg.mask(s.white), cg.mask(s.black), p


def _to_move(cg: CompiledGraph, pair, p: int) -> Move:
    return Move(cg.names[pair[0]], cg.names[pair[1]], WHITE if p == 0 else BLACK)


def solve(s: GameState, limits: Optional[SolveLimits] = None) -> SolveReport:
    """Decide whether the player to move in ``s`` wins.

    Raises CycleError if the graph is cyclic and ResourceExhausted if the
    search visits more than ``limits.max_states`` positions.
    """
    t0 = time.perf_counter()
    search, w, b, p = _prepare(s, limits)
    win, best_i, moves = search.root(w, b, p)
    best = None if best_i is None else _to_move(search.cg, moves[best_i], p)
    return SolveReport(
        outcome=Outcome.WIN if win else Outcome.LOSS,
        best=best,
        states_visited=search.visited,
        memo_entries=0 if search.memo is None else len(search.memo),
        elapsed=time.perf_counter() - t0,
    )


def best_move(s: GameState, limits: Optional[SolveLimits] = None) -> Optional[Move]:
    return solve(s, limits).best


def principal_variation(
    s: GameState, limits: Optional[SolveLimits] = None
) -> list[Move]:
    """Follow best moves until the mover is stuck.

    One search object (and table) serves the whole line, so the state
    limit bounds the total work.
    """
    search, w, b, p = _prepare(s, limits)
    line = []
    state = s
    while True:
        _, best_i, moves = search.root(w, b, p)
        if best_i is None:
            return line
        m = _to_move(search.cg, moves[best_i], p)
        line.append(m)
        state = apply_move(state, m)
        src, dst = moves[best_i]
        bits = (1 << src) | (1 << dst)
        if p == 0:
            w ^= bits
        else:
            b ^= bits
        p ^= 1


def outcome_for(player: Player, s: GameState, report: SolveReport) -> bool:
    """True iff ``player`` wins from ``s`` given its solve report."""
    return (report.outcome is Outcome.WIN) == (s.to_move is player)
