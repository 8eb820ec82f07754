"""Exception hierarchy shared by the library and the command line."""


class DeltaPError(Exception):
    """Base class for all errors raised by deltap."""


class DataShapeError(DeltaPError, ValueError):
    """Input arrays have the wrong shape, length, or are empty."""


class ParseError(DeltaPError, ValueError):
    """A file could not be parsed under its declared schema."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SchemaError(ParseError):
    """A file parsed but violates structural rules (e.g. duplicate names)."""


class ConfigurationError(DeltaPError, ValueError):
    """Invalid user-supplied parameters."""


class LabelLookupError(DeltaPError, KeyError):
    """A variable label is not present in the data."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class PreconditionError(DeltaPError, ValueError):
    """An operation was called outside its supported regime."""


class OracleRangeError(PreconditionError):
    """Parameters are too concentrated for the quadrature oracle.

    Use the closed-form Dirichlet moments instead.
    """
