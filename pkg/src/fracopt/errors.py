"""Exception hierarchy shared across the package.

Each category maps to a distinct CLI exit code, so keep the set small and
raise the most specific class available.
"""


class FracoptError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class SchemaError(FracoptError):
    """Column/feature missing from a declared schema."""

    exit_code = 2


class IngestionError(FracoptError):
    """Malformed input data (duplicate ids, bad rows)."""

    exit_code = 3


class ConfigError(FracoptError):
    """Invalid configuration value."""

    exit_code = 4


class InsufficientDataError(FracoptError):
    """Not enough observations for the requested computation."""

    exit_code = 5


class InsufficientAnaloguesError(FracoptError):
    """Offset-well filter left too few candidate wells."""

    exit_code = 6


class PipelineError(FracoptError):
    """A pipeline stage produced an unusable intermediate result."""

    exit_code = 7


class InputError(FracoptError):
    """A caller-supplied vector/record is incomplete or inconsistent."""

    exit_code = 8


class FitError(FracoptError):
    """Numerical failure while fitting a model."""

    exit_code = 9
