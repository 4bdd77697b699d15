"""Exception types shared across the toolkit.

The CLI maps these onto stable exit codes: usage/parameter problems exit 1,
I/O and parsing problems exit 2, numeric or contract violations exit 3.
"""


class HisampleError(Exception):
    """Base class for all toolkit errors."""


class ParseError(HisampleError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ParameterError(HisampleError):
    """Invalid user-supplied parameter (usage error)."""


class DimensionError(HisampleError):
    """Array shape does not match the graph it is attached to."""


class ContractError(HisampleError):
    """A call violated an operation's precondition."""
