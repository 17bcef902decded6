"""Exception types shared across the package."""


class HarmapError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(HarmapError):
    """Raised when expression text does not conform to the grammar.

    `position` is the 0-based index into the source string where the
    problem was detected.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    """Identifier other than z, i, exp, sin, cos, log."""


class NegativeExponentError(ExprSyntaxError):
    """Integer power with a negative exponent."""


class SingularityError(HarmapError):
    """Evaluation hit a quotient with (near-)zero denominator or log(0)."""

    def __init__(self, point, detail="singular evaluation"):
        super().__init__(f"{detail} at z = {point}")
        self.point = point


class UndefinedDilatationError(HarmapError):
    """g'/h' requested where h' vanishes."""

    def __init__(self, point):
        super().__init__(f"dilatation undefined (h' = 0) at z = {point}")
        self.point = point


class DomainError(HarmapError):
    """Argument outside the required domain (e.g. not in the open disk)."""


class NumericalError(HarmapError):
    """A numerical procedure failed (all-singular grid, bracketing failure)."""
