"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration/usage problems exit 1,
data generation and file-format problems exit 2, numerical failures exit 3.
"""


class CliqueSymError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(CliqueSymError, ValueError):
    """A requested setting is outside the supported range."""


class UsageError(CliqueSymError, ValueError):
    """An API call violated a precondition (bad index, length mismatch)."""


class GenerationError(CliqueSymError, RuntimeError):
    """Dataset generation could not satisfy its constraints."""


class DataFormatError(CliqueSymError, RuntimeError):
    """A dataset or results file could not be parsed."""


class NumericalError(CliqueSymError, RuntimeError):
    """A numerical routine failed (e.g. singular metric system)."""
