"""Exception hierarchy shared by the numerical modules."""


class NumericalError(ArithmeticError):
    """A computation could not deliver a result to the requested accuracy."""


class ConvergenceError(NumericalError):
    """A series, quadrature or truncation criterion was not met within budget."""


class PoleError(NumericalError, ValueError):
    """Argument sits on a pole (e.g. Gamma at a non-positive integer)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


class FitError(NumericalError):
    """A least-squares fit was requested on too little data."""


class TailTooLargeError(NumericalError):
    """The truncated spectral tail exceeds the synthesis tolerance."""

    def __init__(self, bound: float, tol: float):
        super().__init__(f"tail bound {bound:.6e} exceeds tolerance {tol:.6e}")
        self.bound = bound
        self.tol = tol


class InconsistentDataError(ValueError):
    """Boundary data contradicts an assertion made by the caller."""


class NormalizationMissingError(ValueError):
    """A free parameter of the solution family was not pinned down."""
