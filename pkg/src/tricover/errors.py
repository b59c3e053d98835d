"""Exception types shared across the package."""


class TricoverError(Exception):
    """Base class for all package errors."""


class GraphError(TricoverError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class VertexOutOfRangeError(GraphError):
    pass


class BadParamsError(TricoverError):
    pass


class InstanceTooLargeError(TricoverError):
    pass


class StructureInvalidError(TricoverError):
    """A charging engine was given a structure with open violations."""


class NotACoverError(TricoverError):
    pass


class NotThirdIntegralError(TricoverError):
    pass


class MissingInputError(TricoverError):
    pass


class PinBaseEdgeError(TricoverError):
    pass


class AlreadyPinnedError(TricoverError):
    pass


class AlreadySpentError(TricoverError):
    pass


class LendOutDegreeError(TricoverError):
    pass


class InternalChargeError(TricoverError):
    """Charging produced an impossible state; carries repair focus edges.

    Raised when an intermediate invariant fails (for example an edge
    accumulating more than one unit of credit, or a Discharge-and-Pin step
    not finding a free triangle).  The cover pipeline catches it and feeds
    ``focus_edges`` to the targeted swap search.
    """

    def __init__(self, message: str, focus_edges=()):
        super().__init__(message)
        self.focus_edges = frozenset(focus_edges)


class ExistenceInAViolatedError(InternalChargeError):
    pass


class RepairExhaustedError(TricoverError):
    """The swap escalation failed to repair a failing charging certificate."""

    def __init__(self, message: str, focus_edges=(), detail=None):
        super().__init__(message)
        self.focus_edges = frozenset(focus_edges)
        self.detail = detail
