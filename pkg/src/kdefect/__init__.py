"""Exact maximum k-defective clique search."""

from .branch import Branch, ContractError, Incumbent
from .graph import DegeneracyOrder, Graph, GraphFormat, degeneracy_order, load_graph
from .solver import SolveReport, SolverConfig, bbres_rec, solve

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "ContractError",
    "DegeneracyOrder",
    "Graph",
    "GraphFormat",
    "Incumbent",
    "SolveReport",
    "SolverConfig",
    "bbres_rec",
    "degeneracy_order",
    "load_graph",
    "solve",
    "__version__",
]
