"""Exception hierarchy shared by all pvaudit modules."""


class PvauditError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PvauditError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(PvauditError, ValueError):
    """An operation was invoked in a structurally invalid way."""


class ValidationError(PvauditError, ValueError):
    """Input data failed validation; the message names the offending row."""


class SchemaError(ValidationError):
    """An input file does not match the documented column schema."""


class FixtureUnavailableError(PvauditError):
    """A reproduction target needs data that is not bundled with the package."""
