"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: usage errors -> 1, data errors -> 2,
anything else -> 3.
"""


class StrokekitError(Exception):
    """Base class for all toolkit errors."""


class StructureError(StrokekitError):
    """Ink structure is invalid (empty character, empty stroke, bad shape)."""


class DimensionError(StrokekitError):
    """Vector/matrix size does not match what an operation requires."""


class DomainError(StrokekitError):
    """A value lies outside the range an operation is defined on."""


class DataFormatError(StrokekitError):
    """A file could not be parsed into the expected document shape."""


class VersionError(DataFormatError):
    """A document declares a schema version this build does not speak."""


class IntegrityError(DataFormatError):
    """A container's checksum does not match its payload."""


class UsageError(StrokekitError):
    """Caller combined artifacts that do not belong together."""


class TrainingError(StrokekitError):
    """Training preconditions are not met (empty class, single class...)."""


class ModelIntegrityError(StrokekitError):
    """A multiclass model is missing pieces it is required to have."""
