class OpaugError(Exception):
    """Base class for all library errors."""


class GraphParseError(OpaugError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class GraphValidationError(OpaugError, ValueError):
    pass


class DisconnectedGraphError(OpaugError, ValueError):
    pass


class NotOuterplanarError(OpaugError, ValueError):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SizeGuardError(OpaugError, ValueError):
    """Raised by exponential oracles when the input is too large for them."""


class DecompositionError(OpaugError, ValueError):
    pass


class ConstructionError(OpaugError, AssertionError):
    """An internal construction produced a result that failed its own validator."""
