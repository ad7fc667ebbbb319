class TriadicError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(TriadicError, ValueError):
    def __init__(self, message, *shapes):
        super().__init__(message)
        self.shapes = shapes


class NonFiniteError(TriadicError, ArithmeticError):
    """Raised when a NaN/Inf shows up in a state or derivative.

    ``where`` names the offending entry, e.g. ``("a2", 0, 1, 2)``; ``time`` is
    set by the integrator when the failure happens mid-run.
    """

    def __init__(self, message, where=None, time=None, max_abs=None):
        super().__init__(message)
        self.where = where
        self.time = time
        self.max_abs = max_abs


class ConfigError(TriadicError, ValueError):
    def __init__(self, message, path=()):
        self.bare_message = message
        if path:
            message = f"{'.'.join(str(p) for p in path)}: {message}"
        super().__init__(message)
        self.path = tuple(path)
