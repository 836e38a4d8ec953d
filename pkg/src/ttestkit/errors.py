"""Exception hierarchy shared by the library and the command line."""


class TTestKitError(Exception):
    """Base class for all errors raised by ttestkit."""


class DomainError(TTestKitError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class DataError(TTestKitError, ValueError):
    """Input data is malformed or statistically unusable.

    ``row`` is the 1-based data row number when the error came from a CSV row.
    """

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class InsufficientDataError(DataError):
    pass


class DegenerateSampleError(DataError):
    pass


class CorpusError(DataError):
    """The input contains no usable records at all."""


class FitError(TTestKitError, ValueError):
    pass


class NumericalError(TTestKitError, ArithmeticError):
    """A series or quadrature failed to reach its error target.

    ``estimate`` and ``abs_error_bound`` carry the partial result so callers
    can decide whether it is still usable.
    """

    def __init__(self, message, estimate=float("nan"), abs_error_bound=float("inf")):
        super().__init__(f"{message} (estimate={estimate!r}, bound={abs_error_bound!r})")
        self.estimate = estimate
        self.abs_error_bound = abs_error_bound
