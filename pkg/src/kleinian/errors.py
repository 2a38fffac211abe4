"""Exception hierarchy shared by all modules."""


class KleinianError(Exception):
    """Base class for library errors."""


class ContextError(KleinianError):
    pass


class ShapeError(KleinianError):
    pass


class DivisionByZero(KleinianError, ZeroDivisionError):
    pass


class GaugeError(KleinianError):
    pass


class StabilityError(KleinianError):
    pass


class GenerationError(KleinianError):
    pass


class ValidationError(KleinianError):
    pass


class BoundError(KleinianError):
    pass


class WrongOrderingError(KleinianError):
    pass


class NotInFamilyError(KleinianError):
    pass


class WindowError(KleinianError):
    pass


class NotDimOneFamilyError(KleinianError):
    pass


class ParseError(KleinianError):
    pass


class GenericityWarning(UserWarning):
    pass
