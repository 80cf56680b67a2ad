"""Exception hierarchy."""


class OUError(ValueError):
    """Base class for all errors raised by this package."""


class NotSymmetric(OUError):
    pass


class NegativeEigenvalue(OUError):
    pass


class NotInCameronMartin(OUError):
    """A vector has a component outside range(Q^{1/2})."""


class SpecInvalid(OUError):
    pass


class MissingMetadata(OUError):
    """A closed form (gradient, Hessian, Holder constant) was required but not declared."""


class ToleranceNotMet(OUError):
    pass


class ConfigError(OUError):
    pass
