"""Exception types shared across the package."""


class AmechError(Exception):
    """Base class for all package errors."""


class NonFiniteField(AmechError):
    """A field evaluation or finite difference produced a non-finite value.

    `index` identifies the coordinate direction (or flat output position)
    at which the non-finite value appeared, when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ShapeError(AmechError):
    """An array argument has the wrong dimension or shape."""


class SingularHessian(AmechError):
    """The fiber Hessian is singular or too ill-conditioned to invert."""


class NoConvergence(AmechError):
    """An iterative solver exhausted its iteration budget."""


class PreconditionFailed(AmechError):
    """A documented precondition of an operation does not hold."""


class InvalidMetric(AmechError):
    """A metric argument is not symmetric positive definite."""


class UnknownChannel(AmechError):
    """A requested monitor channel does not exist on the trajectory."""
