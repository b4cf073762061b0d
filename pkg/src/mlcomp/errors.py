"""Exception hierarchy shared across the package."""


class MLCompError(Exception):
    """Base class for every error raised by mlcomp."""


class ShapeError(MLCompError, ValueError):
    """Dimension or alphabet mismatch between operands."""


class RangeError(MLCompError, ValueError):
    """An index or symbol lies outside its admissible range."""


class DegenerateInputError(MLCompError, ValueError):
    """Input is well-formed but degenerate (e.g. a transposition (u, u))."""


class NotInvertibleError(MLCompError, ValueError):
    """A permutation was required but a singular map was given."""


class BudgetError(MLCompError, RuntimeError):
    """A configured size or work budget would be exceeded."""


class ParseError(MLCompError, ValueError):
    """Malformed text file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
