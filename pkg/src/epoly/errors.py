"""Exception hierarchy for the epoly engine."""


class EpolyError(Exception):
    """Base class for all engine errors."""


class InputError(EpolyError):
    """A request or operation argument violates a documented precondition."""


class ParseError(InputError):
    """Surface-syntax error; carries a position within the request text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)


class InternalError(EpolyError):
    """An internal invariant failed; the result would not be trustworthy."""


class PrecisionLimitError(InternalError):
    """Interval refinement hit the configured precision cap before deciding."""
