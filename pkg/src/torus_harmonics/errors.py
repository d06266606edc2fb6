"""Exception types raised by torus_harmonics."""


class TorusHarmonicsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TorusHarmonicsError, ValueError):
    """Invalid field size or run configuration."""


class NonPrime(ConfigError):
    pass


class EvenCharacteristic(ConfigError):
    pass


class CapExceeded(ConfigError):
    pass


class ZeroElement(TorusHarmonicsError, ValueError):
    pass


class DomainMismatch(TorusHarmonicsError, ValueError):
    pass


class ContextMismatch(TorusHarmonicsError, ValueError):
    pass


class SingularParameter(TorusHarmonicsError, ValueError):
    pass


class UnsupportedInterpretation(TorusHarmonicsError, ValueError):
    pass


class ValidationFailed(TorusHarmonicsError, RuntimeError):
    """A numerical self-consistency check (e.g. orthogonality) failed."""


class NonIntegralMultiplicity(ValidationFailed):
    pass


class NegativeResidual(ValidationFailed):
    pass


class NotBiEquivariant(TorusHarmonicsError, ValueError):
    pass


class NotAConstituent(TorusHarmonicsError, ValueError):
    pass


class ZeroFunction(TorusHarmonicsError, ValueError):
    pass


class DegenerateChannel(TorusHarmonicsError, RuntimeError):
    pass
