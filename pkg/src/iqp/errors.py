"""Exception hierarchy shared by the solver modules."""


class IqpError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(IqpError):
    """A configured work budget (nodes, children, cells, points) ran out."""


class RankDeficientRows(IqpError):
    """An equality system that must have full row rank does not."""


class NotSymmetric(IqpError):
    """An objective matrix that must be symmetric is not."""


class NotConcave(IqpError):
    """A quadratic form required to be negative semidefinite has a positive eigenvalue."""


class UnboundedRegion(IqpError):
    """A polytope required to be bounded is unbounded."""


class NotAVertexCover(IqpError):
    """The supplied vertex set leaves some edge uncovered."""


class KappaOutOfRange(IqpError):
    """Requested subgraph size is negative or larger than the vertex count."""


class ParseError(IqpError):
    """An input document does not conform to the expected format."""
