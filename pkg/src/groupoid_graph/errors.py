"""Exception hierarchy shared by every module."""


class GroupoidGraphError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(GroupoidGraphError, ValueError):
    """Structural problem with an input description (dangling ids, bad shapes).

    Distinct from an axiom failure, which is reported through a
    :class:`~groupoid_graph.groupoid.ValidationReport` instead.
    """


class PreconditionError(GroupoidGraphError, ValueError):
    """An operation was called on an input outside its domain."""


class ConsistencyError(GroupoidGraphError, RuntimeError):
    """Two computations that must agree did not (certification failure)."""
