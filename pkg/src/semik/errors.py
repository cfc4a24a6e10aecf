"""Exception hierarchy shared by all semik modules."""


class SemikError(Exception):
    """Base class for every error raised by semik."""


class DimensionMismatch(SemikError):
    pass


class KernelMismatch(SemikError):
    pass


class NotSquare(SemikError):
    pass


class NotIdempotent(SemikError):
    pass


class InvalidTable(SemikError):
    pass


class InvalidElement(SemikError):
    pass


class ArgumentTooSmall(SemikError):
    pass


class ShapeMismatch(SemikError):
    pass


class StageOutOfRange(SemikError):
    pass


class UnitalityViolation(SemikError):
    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"step {step} is not unital")


class NotUnital(SemikError):
    pass


class NegativeEntry(SemikError):
    pass


class CarrierTooLarge(SemikError):
    pass


class OrderTooLarge(SemikError):
    pass


class SearchTooLarge(SemikError):
    """A bounded enumeration would exceed its configured budget."""


class MalformedFile(SemikError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
