"""Exception types shared across the package."""


class GenmatError(Exception):
    """Base class for all package errors."""


class StructureError(GenmatError, ValueError):
    """Operands live in different rings, variable sets or caps."""


class NotAUnitError(GenmatError, ArithmeticError):
    """Inversion of an element whose constant part is not invertible."""


class DivisibilityError(GenmatError, ArithmeticError):
    """An exact division has no quotient."""


class DegreeRangeError(GenmatError, ValueError):
    """A degree or index outside the admissible range."""


class MembershipError(GenmatError, ValueError):
    """An element is not in the submodule a routine expects."""


class UnsupportedPrimeError(GenmatError, ValueError):
    """The requested prime is outside the range where a construction is valid."""
