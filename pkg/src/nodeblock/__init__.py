"""Node blocking on directed acyclic graphs.

Exact solver, the QBF-to-game reduction, and tools that check the
reduction against brute-force QBF evaluation.
"""

from .digraph import Digraph, build_graph, degrees, out_neighbors, validate_dag
from .errors import NodeBlockError
from .game import BLACK, WHITE, GameState, Move, Player, apply_move, legal_moves, replay
from .qbf import QbfFormula, RestrictedQbf, evaluate, normalize_restricted, parse_qdimacs, random_formula
from .reduction import ReductionArtifact, build_component, build_game
from .solver import Outcome, SolveLimits, SolveReport, best_move, principal_variation, solve

__version__ = "0.1.0"
