"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class NtinvError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class SpecMismatch(NtinvError):
    pass


class FieldDivisionByZero(NtinvError, ZeroDivisionError):
    pass


class ParseError(NtinvError, ValueError):
    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class IndexOutOfRange(NtinvError, IndexError):
    pass


class IndexOrderViolation(NtinvError, ValueError):
    pass


class SizeMismatch(NtinvError, ValueError):
    pass


class ZeroScalar(NtinvError, ValueError):
    pass


class FPreconditionViolated(NtinvError):
    pass


class QPreconditionViolated(NtinvError):
    pass


class LeaderPositionViolated(QPreconditionViolated):
    pass


class InternalInvariantViolation(NtinvError, AssertionError):
    pass


class NotReduced(NtinvError):
    pass


class ZeroClass(NtinvError):
    pass


class AmbientMismatch(NtinvError):
    pass


class PreconditionViolated(NtinvError):
    pass


class FieldNotEnumerable(NtinvError):
    pass


class BudgetExceeded(NtinvError):
    pass


class SchemaVersionMismatch(NtinvError):
    pass


class IoError(NtinvError, OSError):
    pass
