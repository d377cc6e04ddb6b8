"""Exception types raised across the package."""


class SisnetError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(SisnetError, ValueError):
    pass


class InvalidGraphError(SisnetError, ValueError):
    pass


class ConstructionFailureError(SisnetError, RuntimeError):
    """Configuration-model construction could not realize the degree sequence.

    Attributes
    ----------
    erased_stubs : int
        Number of stubs dropped by the edge-erasure fallback.
    total_stubs : int
        Sum of the requested degrees.
    """

    def __init__(self, message, erased_stubs=0, total_stubs=0, isolated_nodes=0):
        super().__init__(message)
        self.erased_stubs = erased_stubs
        self.total_stubs = total_stubs
        self.isolated_nodes = isolated_nodes


class UndefinedAssortativityError(SisnetError, ArithmeticError):
    """Assortativity is 0/0 because every edge end has the same degree."""


class NonConvergenceError(SisnetError, RuntimeError):
    def __init__(self, message, last_iterate=None, iterations=0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class ReducibilityError(SisnetError, RuntimeError):
    """The graph-process kernel has no unique stationary distribution."""

    def __init__(self, message, x=None, t=None):
        super().__init__(message)
        self.x = x
        self.t = t
