"""Exception hierarchy shared by every module."""


class SosIdentError(Exception):
    """Base class for all errors raised by sosident."""


class DivisionByZero(SosIdentError, ZeroDivisionError):
    pass


class NoImaginaryUnit(SosIdentError):
    """The modulus is 3 mod 4, so -1 has no square root."""


class BadModulus(SosIdentError, ValueError):
    pass


class ArityMismatch(SosIdentError, ValueError):
    pass


class DegreeMismatch(SosIdentError, ValueError):
    pass


class ShapeMismatch(SosIdentError, ValueError):
    pass


class OddDegree(SosIdentError, ValueError):
    pass


class DependentInput(SosIdentError, ValueError):
    """Forms that must be linearly independent are not."""


class NotSubgeneric(SosIdentError, ValueError):
    """The number of squares exceeds what the identifiability criterion covers."""


class NotApolar(SosIdentError, ValueError):
    """A dual form does not annihilate the required degree piece."""


class MalformedPolynomial(SosIdentError, ValueError):
    pass
