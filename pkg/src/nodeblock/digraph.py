"""Immutable directed graphs with deterministic topological ordering."""

from __future__ import annotations

import heapq
import re
from typing import Iterable

from .errors import (
    CycleError,
    DuplicateArcError,
    DuplicateVertexError,
    GraphError,
    UnknownVertexError,
)

NAME_RE = re.compile(r"[A-Za-z0-9_.()-]+")


def check_name(name: str) -> str:
    if not isinstance(name, str) or not NAME_RE.fullmatch(name):
        raise GraphError(f"invalid vertex name: {name!r}")
    return name


def _name_key(name: str) -> bytes:
    return name.encode()


class Digraph:
    """A directed graph over named vertices.

    ``vertices`` keeps declaration order; ``arcs`` is a frozenset of
    ``(from, to)`` pairs. Instances are never mutated after construction.
    """

    __slots__ = ("vertices", "arcs", "_out", "_in", "_topo")

    def __init__(self, vertices: Iterable[str], arcs: Iterable[tuple[str, str]]):
        self.vertices = tuple(vertices)
        self.arcs = frozenset(arcs)
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.arcs:
            if u not in out:
                raise UnknownVertexError(u)
            if v not in out:
                raise UnknownVertexError(v)
            out[u].append(v)
            inc[v].append(u)
        self._out = {v: tuple(sorted(ns, key=_name_key)) for v, ns in out.items()}
        self._in = {v: tuple(sorted(ns, key=_name_key)) for v, ns in inc.items()}
        self._topo = None

    def __contains__(self, v) -> bool:
        return v in self._out

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        # declaration order is presentation only
        return set(self.vertices) == set(other.vertices) and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), self.arcs))

    def __repr__(self) -> str:
        return f"Digraph({len(self.vertices)} vertices, {len(self.arcs)} arcs)"

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices, key=_name_key)

    def sorted_arcs(self) -> list[tuple[str, str]]:
        return sorted(self.arcs, key=lambda a: (_name_key(a[0]), _name_key(a[1])))


def build_graph(
    vertex_names: Iterable[str],
    arc_pairs: Iterable[tuple[str, str]],
    strict: bool = False,
) -> Digraph:
    """Build a graph; duplicates collapse unless ``strict`` is set."""
    vertices: list[str] = []
    seen: set[str] = set()
    for name in vertex_names:
        check_name(name)
        if name in seen:
            if strict:
                raise DuplicateVertexError(f"duplicate vertex: {name}")
            continue
        seen.add(name)
        vertices.append(name)
    arcs: list[tuple[str, str]] = []
    arc_seen: set[tuple[str, str]] = set()
    for u, v in arc_pairs:
        if u not in seen:
            raise UnknownVertexError(u)
        if v not in seen:
            raise UnknownVertexError(v)
        if (u, v) in arc_seen:
            if strict:
                raise DuplicateArcError(f"duplicate arc: {u} -> {v}")
            continue
        arc_seen.add((u, v))
        arcs.append((u, v))
    return Digraph(vertices, arcs)


def _find_cycle_arc(g: Digraph, remaining: set[str]) -> tuple[str, str]:
    # every remaining vertex has a remaining predecessor, so walking
    # predecessors must revisit a vertex
    v = min(remaining, key=_name_key)
    visited: dict[str, int] = {}
    path: list[str] = []
    while v not in visited:
        visited[v] = len(path)
        path.append(v)
        v = next(u for u in g._in[v] if u in remaining)
    # (path[k+1], path[k]) are arcs; v precedes path[-1] and closes the loop
    return v, path[-1]


def validate_dag(g: Digraph) -> list[str]:
    """Return the topological order that always removes the smallest
    available vertex. Raises CycleError if none exists."""
    if g._topo is not None:
        return list(g._topo)
    indeg = {v: len(g._in[v]) for v in g.vertices}
    heap = [_name_key(v) for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        v = heapq.heappop(heap).decode()
        order.append(v)
        for u in g._out[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, _name_key(u))
    if len(order) != len(g.vertices):
        remaining = set(g.vertices) - set(order)
        raise CycleError(_find_cycle_arc(g, remaining))
    g._topo = tuple(order)
    return order


def is_acyclic(g: Digraph) -> bool:
    try:
        validate_dag(g)
    except CycleError:
        return False
    return True


def out_neighbors(g: Digraph, v: str) -> tuple[str, ...]:
    try:
        return g._out[v]
    except KeyError:
        raise UnknownVertexError(v) from None


def in_neighbors(g: Digraph, v: str) -> tuple[str, ...]:
    try:
        return g._in[v]
    except KeyError:
        raise UnknownVertexError(v) from None


def degrees(g: Digraph, v: str) -> tuple[int, int]:
    """Return ``(in_count, out_count)`` for ``v``."""
    return len(in_neighbors(g, v)), len(out_neighbors(g, v))
