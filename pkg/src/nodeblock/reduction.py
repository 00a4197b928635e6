"""Compile an alternating ∃∀ 3CNF formula into a node-blocking position.

Each variable x_i gets a gadget G_i: white (W owns the choice) for odd i,
black for even i. Gadgets are chained by merging s(G_i) with t(G_{i+1}).
After the last gadget a white token on ``w`` can step into s(G_n); Black
then pulls a clause token F_j into ``w`` and White must refill F_j from an
x/y vertex whose literal satisfies the clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .digraph import Digraph, build_graph
from .errors import ContradictoryTraceError, FormatError, FormulaError
from .game import BLACK, WHITE, GameState, Player, Trace
from .qbf import QbfFormula, RestrictedQbf, is_restricted

WHITE_ARCS = (
    ("s", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "t"),
    ("v4", "t"), ("v4", "v2"), ("x", "v4"), ("y", "v4"),
)
BLACK_ARCS = (
    ("s", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "t"),
    ("v4", "t"), ("v4", "v2"), ("v5", "v4"), ("v6", "v4"),
    ("v7", "v5"), ("v8", "v6"), ("x", "v7"), ("y", "v8"),
)
WHITE_ROLES = ("s", "t", "x", "y", "v1", "v2", "v3", "v4")
BLACK_ROLES = WHITE_ROLES + ("v5", "v6", "v7", "v8")

# initial token placement per gadget kind; v3 starts empty in both
WHITE_INITIAL = {"s": WHITE, "v4": WHITE, "x": WHITE, "y": WHITE,
                 "v1": BLACK, "v2": BLACK, "t": BLACK}
BLACK_INITIAL = {"s": BLACK, "v4": BLACK, "v5": BLACK, "v6": BLACK,
                 "v7": BLACK, "v8": BLACK,
                 "v1": WHITE, "v2": WHITE, "x": WHITE, "y": WHITE, "t": WHITE}


def role_text(role: str) -> str:
    return f"v_{role[1:]}" if role.startswith("v") else role


@dataclass(frozen=True, order=True)
class RoleLabel:
    """``kind`` is "component", "clause" or "w"."""

    kind: str
    index: int = 0
    role: str = ""

    def __str__(self) -> str:
        if self.kind == "component":
            return f"{role_text(self.role)}(G{self.index})"
        if self.kind == "clause":
            return f"v(F{self.index})"
        return "w"

    @classmethod
    def parse(cls, text: str) -> "RoleLabel":
        if text == "w":
            return cls("w")
        if text.startswith("v(F") and text.endswith(")"):
            return cls("clause", int(text[3:-1]))
        head, _, rest = text.partition("(G")
        if not rest.endswith(")") or not head:
            raise FormatError("bad-label", text)
        role = head.replace("_", "")
        if role not in BLACK_ROLES:
            raise FormatError("bad-label", text)
        return cls("component", int(rest[:-1]), role)


def comp(i: int, role: str) -> RoleLabel:
    return RoleLabel("component", i, role)


def clause_label(j: int) -> RoleLabel:
    return RoleLabel("clause", j)


W_LABEL = RoleLabel("w")


@dataclass(frozen=True)
class Component:
    index: int
    white: bool
    names: dict  # role -> vertex name
    arcs: tuple
    occupancy: dict  # vertex name -> Player, empties omitted

    @property
    def vertices(self) -> list[str]:
        return list(self.names.values())

    def graph(self) -> Digraph:
        return build_graph(self.vertices, self.arcs, strict=True)

    def initial_state(self) -> GameState:
        occ = self.occupancy
        return GameState(
            self.graph(),
            frozenset(v for v, p in occ.items() if p is WHITE),
            frozenset(v for v, p in occ.items() if p is BLACK),
            WHITE if self.white else BLACK,
        )

    def arrival_state(self) -> GameState:
        """Initial state with t emptied and the gadget's owner to move."""
        s = self.initial_state()
        t = self.names["t"]
        return GameState(s.graph, s.white - {t}, s.black - {t}, s.to_move)


def build_component(i: int, white: Optional[bool] = None, prefix: Optional[str] = None) -> Component:
    """Gadget G_i. Odd ``i`` must be white, even ``i`` black.

    Vertex names are ``prefix + role``; the default prefix is ``G<i>.``.
    """
    expected = i % 2 == 1
    if white is None:
        white = expected
    if white != expected:
        raise FormulaError(
            "parity-mismatch", f"component {i} must be {'white' if expected else 'black'}"
        )
    prefix = f"G{i}." if prefix is None else prefix
    roles = WHITE_ROLES if white else BLACK_ROLES
    names = {r: prefix + r for r in roles}
    arcs = tuple((names[a], names[b]) for a, b in (WHITE_ARCS if white else BLACK_ARCS))
    init = WHITE_INITIAL if white else BLACK_INITIAL
    occupancy = {names[r]: p for r, p in init.items()}
    return Component(i, white, names, arcs, occupancy)


@dataclass(frozen=True)
class ReductionArtifact:
    state: GameState
    labels: dict  # RoleLabel -> vertex name (aliases included)
    primary: dict  # vertex name -> its canonical RoleLabel
    n: int
    m: int

    @property
    def graph(self) -> Digraph:
        return self.state.graph

    def vertex(self, label: RoleLabel) -> str:
        return self.labels[label]

    def at(self, i: int, role: str) -> str:
        return self.labels[comp(i, role)]

    def aliases(self) -> list[tuple[str, RoleLabel]]:
        return sorted(
            (v, lab) for lab, v in self.labels.items() if self.primary[v] != lab
        )

    def label_map_text(self) -> str:
        lines = []
        for v in self.graph.sorted_vertices():
            lines.append(f"{v} {self.primary[v]}")
        for v, lab in self.aliases():
            lines.append(f"{v} {lab} alias")
        return "\n".join(lines) + "\n"


def parse_label_map(text: str) -> dict:
    """Inverse of ``label_map_text``: RoleLabel -> vertex name."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "alias"):
            raise FormatError("bad-label-line", raw, lineno)
        out[RoleLabel.parse(parts[1])] = parts[0]
    return out


def build_game(q: QbfFormula) -> ReductionArtifact:
    """Build the chained gadget graph, clause vertices, and start position."""
    if not is_restricted(q):
        raise FormulaError("invalid-input", "formula is not in restricted form")
    q = RestrictedQbf.of(q)
    n, m = q.n, q.m
    comps = [build_component(i) for i in range(1, n + 1)]

    labels: dict[RoleLabel, str] = {}
    primary: dict[str, RoleLabel] = {}
    vertices: list[str] = []
    arcs: list[tuple[str, str]] = []
    occ: dict[str, Player] = {}

    def rename(i: int, role: str) -> str:
        # t(G_i) is the vertex s(G_{i-1}) for i > 1
        if role == "t" and i > 1:
            return comps[i - 2].names["s"]
        return comps[i - 1].names[role]

    for c in comps:
        i = c.index
        for role, name in c.names.items():
            v = rename(i, role)
            labels[comp(i, role)] = v
            if v not in primary:
                primary[v] = comp(i, role)
                vertices.append(v)
        for a, b in WHITE_ARCS if c.white else BLACK_ARCS:
            arcs.append((rename(i, a), rename(i, b)))
        for role, p in (WHITE_INITIAL if c.white else BLACK_INITIAL).items():
            v = rename(i, role)
            if v in occ and occ[v] is not p:
                raise AssertionError(f"junction token conflict at {v}")
            occ[v] = p

    del occ[labels[comp(1, "t")]]
    vertices.append("w")
    labels[W_LABEL] = "w"
    primary["w"] = W_LABEL
    occ["w"] = WHITE
    arcs.append(("w", labels[comp(n, "s")]))
    for j, clause in enumerate(q.clauses, 1):
        f = f"F{j}"
        vertices.append(f)
        labels[clause_label(j)] = f
        primary[f] = clause_label(j)
        occ[f] = BLACK
        arcs.append((f, "w"))
        for lit in clause:
            src = labels[comp(lit.var, "y" if lit.negated else "x")]
            arcs.append((src, f))

    g = build_graph(vertices, arcs)
    state = GameState(
        g,
        frozenset(v for v, p in occ.items() if p is WHITE),
        frozenset(v for v, p in occ.items() if p is BLACK),
        WHITE,
    )
    return ReductionArtifact(state, labels, primary, n, m)


def extract_existential_assignment(t: Trace, a: ReductionArtifact) -> dict:
    """Read ∃-variable values off White's gadget choices.

    x_i (odd i) is True if the trace has y(G_i) -> v_4(G_i) by White, False
    if it has x(G_i) -> v_4(G_i), None if neither.
    """
    played = {(mv.src, mv.dst) for mv in t.moves if mv.player is WHITE}
    out = {}
    for i in range(1, a.n + 1, 2):
        v4 = a.at(i, "v4")
        via_y = (a.at(i, "y"), v4) in played
        via_x = (a.at(i, "x"), v4) in played
        if via_x and via_y:
            raise ContradictoryTraceError(f"both x and y entered v_4 of G{i}")
        out[i] = True if via_y else False if via_x else None
    return out


def expected_vertex_count(n: int, m: int) -> int:
    return 9 * n + m + 2
