"""
🌀 Oscillation Models
Date: 03/09/2025
Description: Parameter sets, regime tags and probability containers for the
two-flavor non-Hermitian oscillation problem.

Internal units: mass-squared in GeV², energies in GeV, times in GeV⁻¹.
"""

import math
from dataclasses import dataclass, asdict, replace
from enum import Enum
from typing import Any, Dict, Tuple

from utils.units import UnitsMode, ev2_to_gev2
from .errors import InvalidParamsError, NonFiniteError

# Default tolerances
DEFAULT_TOL_DEFECT = 1e-9
DEFAULT_REGIME_TOL = 1e-9
DEFAULT_DENSITY_TOL = 1e-12
PT_THETA_TOL = 1e-15
QUARTER_PI = math.pi / 4


class RegimeKind(Enum):
    """PT-symmetry regime of the θ = π/4, χ = 0 Hamiltonian"""
    UNBROKEN = "unbroken"
    BROKEN = "broken"
    EXCEPTIONAL = "exceptional"


class FlavorLabel(Enum):
    """Initial / final state label"""
    A = "a"
    B = "b"


class PTChoice(Enum):
    """(P, T) operator pair used by the commutator check"""
    SIGMA_X_K = "sigmax-k"
    SIGMA_Z_I_SIGMA_Y_K = "sigmaz-isigmay-k"


class InitialStates(Enum):
    """Which pair of pure states the density framework starts from"""
    HERMITIAN_EIGENBASIS = "eigenbasis"
    FLAVOR_BASIS = "flavor"


@dataclass(frozen=True)
class OscillationParams:
    """Physical parameter set of the non-Hermitian Hamiltonian (GeV units)"""
    energy_E: float
    dm2: float
    theta: float
    kappa: float = 0.0
    sigma: float = 0.0
    phi: float = 0.0
    chi: float = 0.0
    mbar2: float = 0.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not math.isfinite(value):
                raise InvalidParamsError(f"{name} must be finite, got {value}")
        if self.energy_E <= 0:
            raise InvalidParamsError(f"energy_E must be positive, got {self.energy_E}")
        if not (0.0 <= self.theta <= math.pi / 2):
            raise InvalidParamsError(f"theta must lie in [0, π/2], got {self.theta}")

    @classmethod
    def from_user_units(cls, energy_GeV: float, dm2_eV2: float, theta: float,
                        kappa_eV2: float = 0.0, sigma_eV2: float = 0.0,
                        phi: float = 0.0, chi: float = 0.0,
                        mbar2_eV2: float = 0.0) -> 'OscillationParams':
        """Build from eV² mass-squared inputs"""
        return cls(
            energy_E=energy_GeV,
            dm2=ev2_to_gev2(dm2_eV2),
            theta=theta,
            kappa=ev2_to_gev2(kappa_eV2),
            sigma=ev2_to_gev2(sigma_eV2),
            phi=phi,
            chi=chi,
            mbar2=ev2_to_gev2(mbar2_eV2),
        )

    def is_pt_symmetric(self) -> bool:
        return abs(self.theta - QUARTER_PI) <= PT_THETA_TOL and self.chi == 0.0

    def with_changes(self, **changes) -> 'OscillationParams':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class Regime:
    """Regime tag with the discriminant (σ+Δm²)² − κ²sin²φ in GeV⁴"""
    kind: RegimeKind
    discriminant: float


@dataclass(frozen=True)
class ProbabilityQuad:
    """The four channel probabilities at one evolution point"""
    p_aa: float
    p_ab: float
    p_ba: float
    p_bb: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise NonFiniteError(f"non-finite probability in {self.as_tuple()}")

    @property
    def sum_a(self) -> float:
        return self.p_aa + self.p_ab

    @property
    def sum_b(self) -> float:
        return self.p_ba + self.p_bb

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.p_aa, self.p_ab, self.p_ba, self.p_bb)

    def max_abs_diff(self, other: 'ProbabilityQuad') -> float:
        return max(abs(x - y) for x, y in zip(self.as_tuple(), other.as_tuple()))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.update(sum_a=self.sum_a, sum_b=self.sum_b)
        return data


__all__ = [
    'DEFAULT_TOL_DEFECT',
    'DEFAULT_REGIME_TOL',
    'DEFAULT_DENSITY_TOL',
    'PT_THETA_TOL',
    'QUARTER_PI',
    'RegimeKind',
    'FlavorLabel',
    'PTChoice',
    'InitialStates',
    'UnitsMode',
    'OscillationParams',
    'Regime',
    'ProbabilityQuad',
]
