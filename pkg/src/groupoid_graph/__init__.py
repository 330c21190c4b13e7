"""Finite groupoid actions on graphs, their crossed products and quotient graphs."""

__version__ = "0.1.0"

from .errors import ConsistencyError, GroupoidGraphError, MalformedInputError, PreconditionError
from .graph import DirectedGraph, GraphAction, Path, validate_graph_action
from .groupoid import FiniteGroupoid, GroupoidOnGroupoidAction, validate_groupoid
from .quotient import QuotientGraphReport, quotient_graph, spectrum

__all__ = [
    "ConsistencyError",
    "DirectedGraph",
    "FiniteGroupoid",
    "GraphAction",
    "GroupoidGraphError",
    "GroupoidOnGroupoidAction",
    "MalformedInputError",
    "Path",
    "PreconditionError",
    "QuotientGraphReport",
    "quotient_graph",
    "spectrum",
    "validate_graph_action",
    "validate_groupoid",
    "__version__",
]
