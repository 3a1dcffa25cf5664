"""
⚠️ Error Models
Date: 03/09/2025
Description: Exception hierarchy shared by the numerical core, the validation
harness and the CLI. Every class also derives from the closest builtin.
"""


class NhoscError(Exception):
    """Base class for every nhosc failure"""


class NonFiniteError(NhoscError, ArithmeticError):
    """NaN or Inf entered or escaped an operation"""


class SingularMatrixError(NhoscError, ArithmeticError):
    """Matrix inverse requested with |det| below threshold"""


class DegenerateNormError(NhoscError, ArithmeticError):
    """G-norm of a state vanished"""


class VanishingNormError(NhoscError, ArithmeticError):
    """Trace of the unnormalized density matrix underflowed"""


class InvalidParamsError(NhoscError, ValueError):
    """Parameter set or integrator configuration out of its domain"""


class UnsupportedChiError(NhoscError, ValueError):
    """Closed form requested with χ ≠ 0"""


class NotPTSymmetricError(NhoscError, ValueError):
    """PT-only operation called off θ = π/4, χ = 0"""


class WrongRegimeError(NhoscError, ValueError):
    """Operation called in a PT regime it is not defined for"""


class ExceptionalPointError(WrongRegimeError):
    """Closed form evaluated where the eigenvalues coalesce"""


class DegenerateSechError(NhoscError, ValueError):
    """σ + Δm² sin2θ = 0, so z is not defined"""


class InvalidDensityMatrixError(NhoscError, ValueError):
    """Matrix is not Hermitian, trace one and positive semidefinite"""


class ConfigError(NhoscError, ValueError):
    """Run configuration cannot be read or is inconsistent"""


__all__ = [
    'NhoscError',
    'NonFiniteError',
    'SingularMatrixError',
    'DegenerateNormError',
    'VanishingNormError',
    'InvalidParamsError',
    'UnsupportedChiError',
    'NotPTSymmetricError',
    'WrongRegimeError',
    'ExceptionalPointError',
    'DegenerateSechError',
    'InvalidDensityMatrixError',
    'ConfigError',
]
