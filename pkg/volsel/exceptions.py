"""
Error hierarchy for volsel

Every error carries the process exit code the CLI reports for it:
1. Usage errors (bad parameters, dimensions, modes) exit with 2
2. Budget and cap violations exit with 3
3. Parse failures exit with 4
"""

from volsel.constants import EXIT_BUDGET, EXIT_INTERNAL, EXIT_PARSE, EXIT_USAGE


class VolselError(Exception):
    exit_code = EXIT_INTERNAL


class InvalidParameterError(VolselError, ValueError):
    exit_code = EXIT_USAGE


class DimensionMismatchError(InvalidParameterError):
    pass


class ModeError(InvalidParameterError):
    pass


class InvalidPointSetError(InvalidParameterError):
    pass


class BudgetExceededError(VolselError):
    exit_code = EXIT_BUDGET


class CellCapExceededError(BudgetExceededError):
    def __init__(self, message: str, size: int, cap: int):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ParseError(VolselError):
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number


class EmbeddingError(VolselError):
    """Adjacency preservation failed while building a hardness instance (a bug)."""
