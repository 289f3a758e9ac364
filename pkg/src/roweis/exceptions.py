"""Exception taxonomy shared by the library and the CLI.

The CLI maps these onto stable exit codes: ConfigError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class RoweisError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RoweisError, ValueError):
    """Invalid parameters, shapes, or option combinations."""


class DataError(RoweisError, ValueError):
    """Malformed or unusable input data (CSV files, label vectors)."""


class NumericalError(RoweisError, RuntimeError):
    """A numerical precondition failed or a solver could not converge."""
