"""Exception types shared across the package."""


class HimmError(Exception):
    """Base class for all errors raised by this package."""


class UnknownVertex(HimmError):
    pass


class UnknownEdge(HimmError):
    pass


class UnknownNode(HimmError):
    pass


class NoSharedVertex(HimmError):
    pass


class VertexNotInEdge(HimmError):
    pass


class WouldEmptyEdge(HimmError):
    pass


class NotSizeTwo(HimmError):
    pass


class NoCommonEndpoint(HimmError):
    pass


class WouldCreateLoop(HimmError):
    pass


class NotConnectedByEdge(HimmError):
    pass


class LoopCreated(HimmError):
    pass


class IndexOutOfRange(HimmError):
    pass


class CapExceeded(HimmError):
    pass


class ProjectionFailure(HimmError):
    pass


class ParseError(HimmError):
    pass


class StepError(HimmError):
    """An operation inside a replayed sequence failed; carries the step index."""

    def __init__(self, index, cause):
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause
