"""Exception hierarchy shared by every module of the package."""


class BoolNetError(Exception):
    """Base class for all errors raised by boolattr."""


class StructuralError(BoolNetError, ValueError):
    """A value does not fit the network it is used with (width, gene index)."""


class SemanticError(BoolNetError, ValueError):
    """An expression refers to something that is not declared."""


class CapacityError(BoolNetError):
    """A size guardrail was exceeded (DNF blowup, state-space limits)."""


class DomainError(BoolNetError, ValueError):
    """The input is well formed but is not an object of the dynamics (e.g. not a cycle)."""


class ParseError(BoolNetError):
    """Syntax error in a network file, with 1-based position information."""

    def __init__(self, message, line=1, column=1, token=None):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token is not None:
            where += f" (near {token!r})"
        super().__init__(f"{where}: {message}")


class ResourceError(BoolNetError):
    """The bounded search hit its path-length cap before exhausting all paths.

    ``partial`` holds whatever was found before giving up.
    """

    def __init__(self, message, cap, partial=None):
        super().__init__(message)
        self.cap = cap
        self.partial = partial
