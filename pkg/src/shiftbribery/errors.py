"""Exception hierarchy shared by all modules."""


class BriberyError(Exception):
    """Base class for every error raised by this package."""


class ShiftOutOfRange(BriberyError, ValueError):
    pass


class InvalidThreshold(BriberyError, ValueError):
    pass


class InstanceTooLarge(BriberyError):
    pass


class WrongRule(BriberyError, ValueError):
    pass


class WrongPriceKind(BriberyError, ValueError):
    pass


class NoApplicableSolver(BriberyError):
    pass


class PreconditionViolated(BriberyError, ValueError):
    pass


class ParseError(BriberyError, ValueError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
