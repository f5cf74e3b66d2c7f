"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed or inconsistent input data (bad table, bad prior, bad flag value)."""


class NumericPreconditionError(ValueError):
    """Input is structurally valid but outside the domain of the requested
    computation (zero posterior cells, degenerate variance, ...)."""


class ZeroCellError(NumericPreconditionError):
    """A computation that requires strictly positive posterior cells met a zero.

    Carries the offending cell indices so callers can suggest a positive prior.
    """

    def __init__(self, cells, message=None):
        self.cells = list(cells)
        if message is None:
            message = (
                "posterior has zero cells at %s; use a strictly positive prior "
                "(jeffreys, perks, uniform) to make this quantity well defined"
                % (self.cells,)
            )
        super().__init__(message)


class DegenerateError(NumericPreconditionError):
    """Leading-order variance is zero, so scale-free shape statistics are undefined."""


class FitError(RuntimeError):
    """Moment-matching solver failed to converge; carries the best residual seen."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
