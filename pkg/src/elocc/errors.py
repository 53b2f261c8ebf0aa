"""Exception hierarchy shared by every module of the package."""


class ELOCCError(Exception):
    """Base class for all domain errors raised by this package."""


class AllTruncated(ELOCCError):
    pass


class NegativeInput(ELOCCError):
    pass


class SizeTooLarge(ELOCCError):
    pass


class NotSymmetric(ELOCCError):
    pass


class OddSize(ELOCCError):
    pass


class DimensionMismatch(ELOCCError):
    pass


class NotNormalized(ELOCCError):
    pass


class BadSplit(ELOCCError):
    pass


class NoTransition(ELOCCError):
    pass


class MultipleTransitions(ELOCCError):
    pass


class DegenerateGround(ELOCCError):
    pass


class ConfigError(ELOCCError):
    """Invalid user configuration; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
