"""Exception hierarchy shared by all nodeblock modules."""


class NodeBlockError(Exception):
    """Base class for every error raised by this package."""


class GraphError(NodeBlockError):
    pass


class UnknownVertexError(GraphError):
    def __init__(self, name):
        super().__init__(f"unknown vertex: {name!r}")
        self.name = name


class DuplicateVertexError(GraphError):
    pass


class DuplicateArcError(GraphError):
    pass


class CycleError(GraphError):
    """The graph is not acyclic. ``arc`` lies on a cycle."""

    def __init__(self, arc):
        super().__init__(f"cycle detected through arc {arc[0]} -> {arc[1]}")
        self.arc = arc


class IllegalMoveError(NodeBlockError):
    """A move violates the rules. ``reason`` is one of the REASON_* tags in game."""

    def __init__(self, move, reason, index=None):
        where = "" if index is None else f" at index {index}"
        super().__init__(f"illegal move {move}{where}: {reason}")
        self.move = move
        self.reason = reason
        self.index = index


class ResourceExhausted(NodeBlockError):
    def __init__(self, states_visited):
        super().__init__(f"state limit exceeded after {states_visited} states")
        self.states_visited = states_visited


class FormatError(NodeBlockError):
    """Malformed QDIMACS / NBG / label-map text."""

    def __init__(self, kind, message, line=None):
        where = "" if line is None else f"line {line}: "
        super().__init__(f"{where}{kind}: {message}")
        self.kind = kind
        self.line = line


class FormulaError(NodeBlockError):
    """A formula does not meet an operation's shape requirements."""

    def __init__(self, kind, message):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class ContradictoryTraceError(NodeBlockError):
    pass
