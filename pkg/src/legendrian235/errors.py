"""Exception hierarchy.  The CLI maps ``DomainError`` to exit code 1."""


class DomainError(ValueError):
    """A mathematically invalid request (bad input for an operation)."""


class ExactDivisionError(DomainError, ZeroDivisionError):
    pass


class UnknownVariableError(DomainError):
    pass


class ParseError(DomainError):
    pass
