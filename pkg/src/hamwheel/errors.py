"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HamwheelError(Exception):
    """Base class for every error raised by this package."""


class GraphError(HamwheelError, ValueError):
    """Invalid graph construction or invalid generator parameters."""


class Graph6Error(HamwheelError, ValueError):
    """Malformed graph6 input."""


class Graph6LengthError(Graph6Error):
    pass


class Graph6PaddingError(Graph6Error):
    pass


class Graph6ByteError(Graph6Error):
    pass


class InfeasibleError(HamwheelError):
    """The requested exact computation exceeds its feasibility cap."""


class NotRegularError(HamwheelError, ValueError):
    pass


class NotFoundError(HamwheelError):
    """A search the caller asked for turned up nothing within its limits."""


class PathNotFound(NotFoundError):
    def __init__(self, message: str, distance: int | None = None):
        super().__init__(message)
        # None means the target set is unreachable in G - W.
        self.distance = distance


class BallNotFound(NotFoundError):
    pass


class ExtractionFailed(HamwheelError):
    def __init__(self, message: str, best=None, violating=None):
        super().__init__(message)
        self.best = best
        self.violating = violating


class PipelineError(HamwheelError):
    """A stage of the wheel pipeline failed; carries the stage name and partial artifacts."""

    def __init__(self, stage: str, message: str, partial: dict | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.partial = partial or {}


class NotBetaGraph(HamwheelError):
    """A pair of disjoint sets, both larger than beta*n, with no edge between them."""

    def __init__(self, message: str, pair: tuple[frozenset, frozenset]):
        super().__init__(message)
        self.pair = pair


class InvariantError(HamwheelError, AssertionError):
    """An internal structural invariant was found violated (a bug, never user error)."""
