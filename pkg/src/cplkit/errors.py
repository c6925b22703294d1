"""Exception hierarchy shared by every cplkit module."""


class CplkitError(Exception):
    """Base class; the CLI maps any subclass to exit code 2."""


class SizeCapExceeded(CplkitError):
    pass


class ParseError(CplkitError):
    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class SortError(CplkitError):
    pass


class FrameFormatError(CplkitError, ValueError):
    pass


class UnboundVariable(CplkitError):
    pass


class UnknownConstant(CplkitError):
    pass


class UnknownPredicate(CplkitError):
    pass


class UnknownProposition(CplkitError):
    pass


class NotMonotonic(CplkitError):
    pass


class NotASubset(CplkitError):
    pass


class EmptyFamily(CplkitError):
    pass


class ClassMismatch(CplkitError):
    pass
