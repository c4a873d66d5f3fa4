"""Exception types shared across the package."""


class AnonatomError(Exception):
    """Base class for every error this package raises on purpose."""


class SchemaError(AnonatomError):
    """An attribute name is unknown, duplicated, or malformed."""


class ArityError(AnonatomError):
    """Two attribute sequences that must have equal length do not."""


class ParseError(AnonatomError):
    """Input text does not match the atom, formula, or CSV grammar."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None and column is not None:
            where = f" (line {line}, column {column})"
        elif line is not None:
            where = f" (line {line})"
        elif column is not None:
            where = f" (column {column})"
        super().__init__(message + where)


class FragmentError(AnonatomError):
    """An entailment engine was asked about atoms outside its fragment."""


class ResourceError(AnonatomError):
    """A configured size or work budget was exceeded."""


class ConfigError(AnonatomError):
    """An oracle configuration violates its documented limits."""


class DomainError(AnonatomError):
    """A quantifier was evaluated over an empty value domain."""


class VerificationError(AnonatomError):
    """A countermodel builder produced a team that failed self-verification."""
