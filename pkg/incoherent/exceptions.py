__author__ = 'maintainers@incoherent-eisenstein.org'


class PoleError(ZeroDivisionError):
    """Raised when a function is evaluated at one of its poles"""
    pass


class DomainError(ValueError):
    """Raised if an argument lies outside the domain of the requested operation"""
    pass


class SplitPrimeError(DomainError):
    """Raised if a local computation which needs a non-split prime was given a split one"""
    pass


class InvalidFieldError(ValueError):
    """Raised if q is not a prime congruent to 3 modulo 4 and larger than 3"""
    pass


class InvalidDiscriminantError(ValueError):
    """Raised if a discriminant is not negative, not 0 or 1 mod 4, or not fundamental where required"""
    pass


class ConvergenceError(ArithmeticError):
    """Raised if a quadrature or a series did not reach the requested tolerance"""
    pass


class PrecisionError(ArithmeticError):
    """Raised if the working precision is not enough for the requested accuracy"""
    pass


class ToleranceError(ArithmeticError):
    """Raised if an oracle comparison exceeds the requested tolerance"""
    pass


class NoHandlerError(NotImplementedError):
    """Raised if no handler that can handle the command was found"""
    pass
