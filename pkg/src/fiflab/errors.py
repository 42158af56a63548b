"""Exception hierarchy for fiflab.

Everything derives from :class:`FifError` (a ``ValueError``) so callers can catch
the whole family at once. ``DataValidationError`` marks problems with user
supplied data; the CLI maps it to exit code 4.
"""


class FifError(ValueError):
    pass


class DataValidationError(FifError):
    pass


# core
class NotStrictlyIncreasing(DataValidationError):
    def __init__(self, index: int):
        super().__init__(f"abscissae not strictly increasing at index {index}")
        self.index = index


class TooFewKnots(DataValidationError):
    pass


class DegenerateInterval(FifError):
    pass


class NotContractive(FifError):
    pass


class InvalidScaling(FifError):
    pass


class OutOfDomain(FifError):
    pass


# contraction
class EmptySample(FifError):
    pass


class NotInCarrier(FifError):
    pass


class InvalidModulus(FifError):
    pass


# ifs
class LengthMismatch(FifError):
    pass


class SeedMismatch(DataValidationError):
    pass


class BaseEndpointMismatch(FifError):
    pass


class DegenerateBase(FifError):
    pass


class EmptyCloud(FifError):
    pass


# fif
class GridMismatch(FifError):
    pass


class NoConvergence(FifError):
    pass


# dimension
class InvalidRatios(FifError):
    pass


class DegenerateRange(FifError):
    pass


# data_io
class BadHeader(DataValidationError):
    pass


class BadRow(DataValidationError):
    def __init__(self, line: int, field: str, message: str = ""):
        text = f"line {line}, field {field!r}"
        if message:
            text += f": {message}"
        super().__init__(text)
        self.line = line
        self.field = field


class OrderViolation(DataValidationError):
    pass


class SinkWriteFailure(FifError):
    pass
