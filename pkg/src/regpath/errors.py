"""Exception hierarchy.

``InputError`` covers bad data, labels and arguments; ``NumericalError``
covers solver failures. The CLI maps them to exit codes 2 and 3.
"""


class RegPathError(Exception):
    pass


class InputError(RegPathError, ValueError):
    pass


class NumericalError(RegPathError, ArithmeticError):
    pass


class DimensionMismatch(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class LabelError(InputError):
    pass


class InvalidLabel(InputError):
    pass


class ConstantColumn(InputError):
    pass


class OutOfRange(InputError):
    pass


class EmptyOverlap(InputError):
    pass


class NotPositiveDefinite(NumericalError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class RankDeficient(NumericalError):
    pass


class CollinearActiveSet(NumericalError):
    def __init__(self, message, indices=()):
        super().__init__(f"{message}; active indices {list(indices)}")
        self.indices = tuple(indices)


class DegenerateQuadraticZone(NumericalError):
    pass


class StepLimitExceeded(NumericalError):
    pass


class NonFinite(NumericalError):
    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"{message} at iteration {iteration}"
        super().__init__(message)
        self.iteration = iteration


class MaxItersExceeded(NumericalError):
    """Raised by the fixed-lambda solver; carries the best iterate found."""

    def __init__(self, message, beta=None, kkt=None, lam=None):
        if lam is not None:
            message = f"{message} (lambda={lam!r})"
        super().__init__(message)
        self.beta = beta
        self.kkt = kkt
        self.lam = lam
