"""Exception hierarchy shared across the package."""


class BifurcusError(Exception):
    """Base class for all errors raised by bifurcus."""


class ExpressionError(BifurcusError, ValueError):
    """The input expression cannot be turned into a parameter-affine system."""


class ParseError(ExpressionError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownSymbolError(ParseError):
    pass


class ExponentError(ParseError):
    pass


class ParameterNotAffine(ExpressionError):
    pass


class NoParameter(ExpressionError):
    pass


class NotPolynomialInState(ExpressionError):
    pass


class DegenerateColumnError(BifurcusError, ValueError):
    """f + lambda*g vanishes identically at the requested parameter value."""
