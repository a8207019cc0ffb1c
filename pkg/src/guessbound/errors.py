"""Exception types shared across the package."""


class GuessBoundError(Exception):
    """Base class for all errors raised by guessbound."""


class InfeasibleParameters(GuessBoundError, ValueError):
    """Parameters put ``Q_tol + mu`` at or past 1/2, or leave no positive key."""


class NoSolution(GuessBoundError, ValueError):
    """A root find found no root inside its bracket."""


class Inapplicable(GuessBoundError, ValueError):
    """The fixed-point bound does not apply (``n1 <= n2``)."""


class DimensionError(GuessBoundError, ValueError):
    pass


class BudgetExceeded(GuessBoundError, ValueError):
    """An exhaustive enumeration would exceed its size budget."""


class FormatError(GuessBoundError, ValueError):
    """Malformed key or matrix file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
