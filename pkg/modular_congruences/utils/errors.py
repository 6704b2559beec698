class ModularCongruenceError(ValueError):
    """Base class for every error raised by the library."""


class InvalidPrecision(ModularCongruenceError):
    pass


class ModulusMismatch(ModularCongruenceError):
    pass


class NotInvertible(ModularCongruenceError):
    pass


class BadLeadingTerm(ModularCongruenceError):
    pass


class NotIntegralSqrt(ModularCongruenceError):
    pass


class CompositionDiverges(ModularCongruenceError):
    pass


class NotRevertible(ModularCongruenceError):
    pass


class PrecisionExceeded(ModularCongruenceError):
    pass


class NotExpandable(ModularCongruenceError):
    pass


class UnknownForm(ModularCongruenceError):
    pass


class UnsupportedWeight(ModularCongruenceError):
    pass


class BadParameter(ModularCongruenceError):
    pass


class NoRepresentation(ModularCongruenceError):
    pass
