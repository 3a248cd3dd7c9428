"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PasError(Exception):
    pass


class InputError(PasError, ValueError):
    """Malformed input: bad table text, out-of-range element, size mismatch."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(PasError):
    """Requested computation exceeds a configured size bound."""


class PreconditionError(PasError, ValueError):
    pass


class ConsistencyError(PasError, AssertionError):
    """Two routes that must agree did not; signals a bug, never bad input."""
