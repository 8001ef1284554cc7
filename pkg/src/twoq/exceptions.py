"""Exception hierarchy shared by all modules."""


class TwoQError(Exception):
    """Base class for errors raised by twoq."""


class ValidationError(TwoQError, ValueError):
    """Input matrix violates a structural invariant (shape, unitarity, ...)."""

    def __init__(self, message, invariant=None, residual=None):
        super().__init__(message)
        self.invariant = invariant
        self.residual = residual


class NotSymmetric(ValidationError):
    pass


class DiagonalizationFailed(TwoQError):
    pass


class NotAProduct(TwoQError):
    """Matrix is not a phase times a Kronecker product of 2x2 unitaries."""

    def __init__(self, residual):
        super().__init__(f"not a tensor product (residual {residual:.3e})")
        self.residual = residual


class NotEquivalent(TwoQError):
    pass


class SynthesisFailed(TwoQError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
