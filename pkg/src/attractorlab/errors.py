"""Shared exception types.

Every public operation documents which of these it can raise; nothing else
escapes the package on purpose.
"""


class ContractViolation(ValueError):
    """An argument breaks a documented precondition (dimension/norm mismatch,
    unordered times, invalid model parameters, ...)."""


class EmptySetError(ValueError):
    """A set operation received an empty sample where a nonempty one is
    required (only liminf results are allowed to be empty)."""


class UnsupportedModel(ValueError):
    """The operation is not defined for this model (non-dissipative drift,
    forcing without a declared limit, unbounded coefficient, ...)."""


class NumericalFailure(RuntimeError):
    """A solver blew up or an approximation failed to certify.

    ``last_good_time`` is the last time at which the state was finite, when
    that is meaningful.
    """

    def __init__(self, message, last_good_time=None):
        super().__init__(message)
        self.last_good_time = last_good_time
