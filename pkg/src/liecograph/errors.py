"""Shared exception types.  Every structured rejection carries enough context
to name the offending edge/vertex/term in its message."""


class LiecographError(Exception):
    pass


class GraphError(LiecographError):
    pass


class NotConnected(GraphError):
    pass


class HasCycle(GraphError):
    pass


class BadVertexIndex(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class BadEdgeIndex(GraphError):
    pass


class CapExceeded(LiecographError):
    """An enumeration request exceeded the configured size cap."""


class CapTooSmall(LiecographError):
    """A reporting window exceeded the range guaranteed complete by the caps
    a complex was built with.  The caller must rebuild with larger caps."""


class WeightMismatch(LiecographError):
    pass


class MalformedDual(LiecographError):
    pass


class InvalidPresentation(LiecographError):
    pass


class InvalidInput(LiecographError):
    pass


class NotDual(LiecographError):
    pass


class DegreeMismatch(LiecographError):
    pass


class NotSimplyConnected(LiecographError):
    pass


class ParseError(LiecographError):
    def __init__(self, msg, line=None, col=None):
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", col {col}" if col is not None else "")
        super().__init__(msg + where)
        self.line = line
        self.col = col


class UnknownGenerator(ParseError):
    pass


class ArityMismatch(ParseError):
    pass
