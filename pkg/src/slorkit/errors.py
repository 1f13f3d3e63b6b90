"""Exception types shared across the toolkit.

DataError maps to CLI exit code 2 and TrainingError to exit code 3;
parameter misuse raises plain ValueError (exit code 1 when reached from
the command line).
"""


class SlorkitError(Exception):
    """Base class for toolkit errors."""


class DataError(SlorkitError):
    """Malformed, missing, or insufficient input data."""


class TrainingError(SlorkitError):
    """Model training failed (empty corpus, divergence, ...)."""
