"""Node-blocking rules: states, legal moves, move application, replay.

Each vertex holds at most one token. White moves white tokens, Black moves
black tokens, always along an arc into an empty vertex. A player with no
legal move loses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .digraph import Digraph, out_neighbors
from .errors import IllegalMoveError, NodeBlockError, UnknownVertexError

REASON_WRONG_PLAYER = "wrong-player"
REASON_NOT_OWN_TOKEN = "source-not-own-token"
REASON_MISSING_ARC = "missing-arc"
REASON_TARGET_OCCUPIED = "target-occupied"


class Player(enum.Enum):
    WHITE = "W"
    BLACK = "B"

    @property
    def opponent(self) -> "Player":
        return Player.BLACK if self is Player.WHITE else Player.WHITE

    @classmethod
    def parse(cls, text: str) -> "Player":
        return cls(text.strip().upper())

    def __str__(self) -> str:
        return self.value


WHITE = Player.WHITE
BLACK = Player.BLACK


@dataclass(frozen=True, order=True)
class Move:
    src: str
    dst: str
    player: Player = field(compare=False)

    def __str__(self) -> str:
        return f"{self.src}->_{self.player.value} {self.dst}"

    @property
    def arrow(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class GameState:
    """Graph plus token placement plus the player to move.

    Tokens are stored as two disjoint vertex sets; every other vertex of
    ``graph`` is empty.
    """

    graph: Digraph
    white: frozenset
    black: frozenset
    to_move: Player

    def __post_init__(self):
        object.__setattr__(self, "white", frozenset(self.white))
        object.__setattr__(self, "black", frozenset(self.black))
        for v in self.white | self.black:
            if v not in self.graph:
                raise UnknownVertexError(v)
        both = self.white & self.black
        if both:
            raise NodeBlockError(f"vertex holds two tokens: {sorted(both)[0]}")

    def occupant(self, v: str) -> Optional[Player]:
        if v in self.white:
            return WHITE
        if v in self.black:
            return BLACK
        if v not in self.graph:
            raise UnknownVertexError(v)
        return None

    def tokens(self, player: Player) -> frozenset:
        return self.white if player is WHITE else self.black

    @property
    def empty(self) -> frozenset:
        return frozenset(self.graph.vertices) - self.white - self.black

    def occupancy(self) -> dict[str, Optional[Player]]:
        return {v: self.occupant(v) for v in self.graph.vertices}

    def with_turn(self, player: Player) -> "GameState":
        return GameState(self.graph, self.white, self.black, player)


def make_state(
    graph: Digraph,
    occupancy: Mapping[str, Optional[Player]],
    to_move: Player,
) -> GameState:
    white = {v for v, p in occupancy.items() if p is WHITE}
    black = {v for v, p in occupancy.items() if p is BLACK}
    return GameState(graph, frozenset(white), frozenset(black), to_move)


def legal_moves(s: GameState) -> list[Move]:
    """All legal moves for ``s.to_move``, sorted by (from, to) name."""
    p = s.to_move
    occupied = s.white | s.black
    moves = []
    for v in s.tokens(p):
        for u in out_neighbors(s.graph, v):
            if u not in occupied:
                moves.append(Move(v, u, p))
    moves.sort(key=lambda m: (m.src.encode(), m.dst.encode()))
    return moves


def check_move(s: GameState, m: Move) -> Optional[str]:
    """Return the first violated legality condition, or None."""
    if m.player is not s.to_move:
        return REASON_WRONG_PLAYER
    if m.src not in s.graph:
        raise UnknownVertexError(m.src)
    if m.dst not in s.graph:
        raise UnknownVertexError(m.dst)
    if m.src not in s.tokens(m.player):
        return REASON_NOT_OWN_TOKEN
    if (m.src, m.dst) not in s.graph.arcs:
        return REASON_MISSING_ARC
    if m.dst in s.white or m.dst in s.black:
        return REASON_TARGET_OCCUPIED
    return None


def apply_move(s: GameState, m: Move) -> GameState:
    reason = check_move(s, m)
    if reason is not None:
        raise IllegalMoveError(m, reason)
    if m.player is WHITE:
        white = (s.white - {m.src}) | {m.dst}
        black = s.black
    else:
        white = s.white
        black = (s.black - {m.src}) | {m.dst}
    return GameState(s.graph, white, black, m.player.opponent)


def current_player_loses(s: GameState) -> bool:
    return not legal_moves(s)


@dataclass(frozen=True)
class Trace:
    initial: GameState
    moves: tuple
    final: GameState

    def __len__(self) -> int:
        return len(self.moves)


def replay(initial: GameState, moves: Iterable[Move]) -> Trace:
    """Apply ``moves`` in order, stopping at the first illegal one."""
    state = initial
    done = []
    for k, m in enumerate(moves):
        reason = check_move(state, m)
        if reason is not None:
            raise IllegalMoveError(m, reason, index=k)
        state = apply_move(state, m)
        done.append(m)
    return Trace(initial, tuple(done), state)


def parse_move(text: str, player: Player) -> Move:
    """Parse ``a->b`` or ``a b`` into a move for ``player``."""
    if "->" in text:
        src, dst = text.split("->", 1)
    else:
        parts = text.split()
        if len(parts) != 2:
            raise NodeBlockError(f"cannot parse move: {text!r}")
        src, dst = parts
    return Move(src.strip(), dst.strip(), player)


def script(initial_player: Player, *arrows: str) -> list[Move]:
    """Build an alternating move list from ``"a->b"`` strings."""
    moves = []
    p = initial_player
    for a in arrows:
        moves.append(parse_move(a, p))
        p = p.opponent
    return moves
