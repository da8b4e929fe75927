"""Exception hierarchy shared by every nilcount module."""


class NilcountError(Exception):
    """Base class for all library errors."""


class NotAPrimePower(NilcountError, ValueError):
    pass


class TooLarge(NilcountError, ValueError):
    """An enumeration or construction exceeds its desk-scale cap."""


class DivisionByZero(NilcountError, ZeroDivisionError):
    pass


class ShapeMismatch(NilcountError, ValueError):
    pass


class NotSquare(NilcountError, ValueError):
    pass


class NotNilpotentOrbit(NilcountError, ValueError):
    """The orbit of a vector under an operator never reaches zero."""


class NotNilpotentPair(NilcountError, ValueError):
    pass


class NotEventuallyConstant(NilcountError, ValueError):
    pass


class EdgeNotInTree(NilcountError, ValueError):
    pass


class InvalidTriple(NilcountError, ValueError):
    pass


class OutOfRange(NilcountError, ValueError):
    pass
