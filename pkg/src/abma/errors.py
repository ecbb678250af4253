"""Shared exception types.

DataError covers anything wrong with user-supplied data or files and maps to
exit code 2 in the CLI; unexpected exceptions map to exit code 3.
"""


class AbmaError(Exception):
    """Base class for errors raised by this package."""


class DataError(AbmaError):
    """Invalid, inconsistent, or missing input data."""
