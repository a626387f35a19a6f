"""Exception hierarchy shared by all modules.

Three failure families map onto the CLI exit codes: bad input data (exit 1),
validation failures such as defects above tolerance (exit 2), and numerical
failures such as ill-conditioning or ambiguous rank decisions (exit 3).
"""


class ArvesonError(Exception):
    """Base class for all library errors."""


class InputError(ArvesonError):
    """Malformed or inconsistent input data (bad JSON field, size mismatch)."""


class ValidationError(ArvesonError):
    """A mathematical precondition failed beyond tolerance."""


class NumericalError(ArvesonError):
    """A computation could not be completed reliably (conditioning, rank gap)."""
