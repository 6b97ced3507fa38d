"""Exception hierarchy shared by every module."""


class RcSpaceError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RcSpaceError, ValueError):
    """A parameter lies outside its mathematical domain (negative radius, eps >= 1, ...)."""


class PreconditionError(RcSpaceError, ValueError):
    """A point-level precondition failed, e.g. the query point is not in F."""


class ScenarioError(RcSpaceError, ValueError):
    """The pair (F, G) is unusable: empty side, overlapping sides, mixed spaces."""


class CertificateError(RcSpaceError):
    """A construction could not produce the certificate it promises."""


class PrecisionError(CertificateError):
    """Enclosures or subdivisions ran out of budget before separating values."""


class SamplingError(RcSpaceError):
    """Rejection sampling could not find points in the requested region."""


class ParseError(RcSpaceError, ValueError):
    """Malformed scenario text. Carries the 1-based line (and column when known)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
