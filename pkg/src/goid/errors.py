class GoidError(Exception):
    """Base class for library errors."""


class FamilyMismatchError(GoidError, ValueError):
    pass


class UndeterminedError(GoidError):
    """A bounded search ran out before it could decide the question."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class ResourceLimitError(GoidError):
    pass


class NotInSemigroupError(GoidError, ValueError):
    pass


class PointError(GoidError, ValueError):
    pass


class NotComposableError(GoidError, ValueError):
    pass


class NotInQError(GoidError, ValueError):
    """Raised when ``g`` is not an admissible label at ``x``."""


class NotHomeomorphismError(GoidError, ValueError):
    pass


class CoverageError(GoidError):
    """A cocycle table has no entry for some in-window arrow."""


class CertificateError(GoidError, ValueError):
    pass


class ParseError(GoidError):
    def __init__(self, message, line=None, column=None, path=None):
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"{line}:"
            if column is not None:
                loc += f"{column}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.line = line
        self.column = column
        self.path = path
