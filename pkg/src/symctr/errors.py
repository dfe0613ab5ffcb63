"""Exceptions shared across the package."""


class SymctrError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(SymctrError, ValueError):
    """Two values built over different variable tuples were combined."""


class ClosureError(SymctrError, ValueError):
    """A bracket fell outside the span of the basis it was taken in.

    Carries the offending index pair and the unexpressible residual.
    """

    def __init__(self, i, j, residual, message=None):
        self.pair = (i, j)
        self.residual = residual
        super().__init__(
            message or f"bracket of basis elements {i} and {j} is not in the span"
        )


class ExprParseError(SymctrError, ValueError):
    """Expression could not be parsed; carries line, column and token."""

    def __init__(self, message, line=1, column=0, token=None):
        self.line = line
        self.column = column
        self.token = token
        where = f" at line {line}, column {column}"
        tok = f" (near {token!r})" if token else ""
        super().__init__(message + where + tok)
