"""Exception types shared across the package."""


class NotPositiveDefiniteError(Exception):
    """Cholesky factorization failed even at the largest jitter level.

    Attributes
    ----------
    minor_index : int
        1-based order of the smallest leading principal minor that is not
        positive definite (as reported by the factorization routine).
    """

    def __init__(self, minor_index: int, message: str | None = None):
        self.minor_index = int(minor_index)
        super().__init__(
            message
            or f"matrix is not positive definite "
            f"(leading minor of order {minor_index} failed)"
        )


class SingularEmbeddingError(Exception):
    """Embedding factor has a zero diagonal entry and cannot be solved against."""


class DivergenceError(Exception):
    """Solver iterates became non-finite.

    Attributes
    ----------
    iteration : int
        1-based sweep index at which a NaN/Inf was first observed.
    """

    def __init__(self, iteration: int):
        self.iteration = int(iteration)
        super().__init__(f"non-finite iterate at sweep {iteration}")


class CsvParseError(ValueError):
    """A CSV cell or row could not be parsed; carries its location.

    ``row`` is the 1-based line number in the file, ``column`` the 1-based
    field index (None for row-level problems such as ragged length).
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        loc = ""
        if row is not None:
            loc = f" (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)


class StageError(Exception):
    """Wraps a failure inside one pipeline stage with the stage's name."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        super().__init__(f"stage '{stage}': {cause}")
        self.__cause__ = cause
