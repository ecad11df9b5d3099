"""Exception types raised across the package."""


class DimensionMismatch(ValueError):
    pass


class NegativeTemperature(ValueError):
    pass


class ZeroTemperature(ValueError):
    pass


class DomainError(ValueError):
    pass


class NonConvergence(ArithmeticError):
    pass


class OutOfZone(ValueError):
    pass


class InsufficientGrid(ValueError):
    pass


class DegenerateFit(ArithmeticError):
    pass


class ZeroBandwidth(ValueError):
    pass


class BadSite(ValueError):
    pass


class NonNormalizedInput(ValueError):
    pass


class ResonantMode(ArithmeticError):
    """Some phonon mode sits closer to resonance than the configured floor."""


class NoResonance(ValueError):
    pass


class BranchUndefined(ValueError):
    pass


class DegenerateP(ValueError):
    pass


class NoScattering(ArithmeticError):
    pass


class ConfigError(ValueError):
    pass
