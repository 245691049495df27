"""Exception types shared across the package."""


class GraphError(Exception):
    """Base class for all errors raised by this package."""


class SelfLoopError(GraphError):
    """An edge joins a vertex to itself."""


class VertexOutOfRangeError(GraphError):
    """A vertex id falls outside 0..n-1."""


class MalformedGraph6Error(GraphError):
    """A graph6 record is syntactically invalid."""


class MalformedEdgeListError(GraphError):
    """An edge-list document is syntactically invalid."""


class PreconditionViolatedError(GraphError):
    """An operation was invoked outside its stated preconditions."""


class ProofGapError(GraphError):
    """A guaranteed improvement step could not be found.

    This is an auditable finding about the move catalog, not a crash: the
    caller may fall back to the exact solver and flag the trace.
    """

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


class TooLargeError(GraphError):
    """Exhaustive enumeration was requested beyond the supported size."""
