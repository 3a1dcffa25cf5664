"""
⚙️ Run Configuration Models
Date: 03/09/2025
Description: Configuration and output-row models for the nhosc command line
"""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from utils.units import UnitsMode
from .errors import ConfigError
from .oscillation import InitialStates, ProbabilityQuad


class Method(Enum):
    """Evaluation path for probability sweeps"""
    G_METRIC = "g-metric"
    DENSITY_ANALYTIC = "density-analytic"
    DENSITY_TRACE = "density-trace"
    DENSITY_RK4 = "density-rk4"


class ScanVariable(Enum):
    """Quantity swept along the x axis"""
    L = "L"
    L_OVER_E = "LE"
    KAPPA_SIGMA = "kappa-sigma"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass
class UserParams:
    """Physical parameters in user units (eV², GeV, radians)"""
    dm2: float = 2.5e-3
    energy: float = 1.0
    theta: float = math.pi / 4
    kappa: Optional[float] = None
    sigma: float = 0.0
    phi: float = math.pi / 2
    chi: float = 0.0
    mbar2: float = 0.0
    tau: Optional[float] = None
    tau_p: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def uses_angles(self) -> bool:
        """True when the density parameters are given as (α, β)"""
        return self.alpha is not None or self.beta is not None


@dataclass
class ScanSpec:
    """Sweep definition"""
    variable: ScanVariable = ScanVariable.L
    start: float = 0.0
    stop: float = 3000.0
    samples: int = 100
    vary_energy: bool = False
    baseline_km: float = 1000.0
    kappa_range: Tuple[float, float] = (0.0, 2e-2)
    sigma_range: Tuple[float, float] = (-2e-2, 2e-2)

    def validate(self) -> None:
        if self.samples < 2:
            raise ConfigError(f"samples must be at least 2, got {self.samples}")

        ranges = [('scan', (self.start, self.stop))]
        if self.variable is ScanVariable.KAPPA_SIGMA:
            ranges = [('kappa', self.kappa_range), ('sigma', self.sigma_range)]

        for name, (low, high) in ranges:
            if not (math.isfinite(low) and math.isfinite(high)):
                raise ConfigError(f"{name} range must be finite, got ({low}, {high})")
            if not low < high:
                raise ConfigError(f"{name} range must be ordered, got ({low}, {high})")

        if self.variable is ScanVariable.L and self.start < 0:
            raise ConfigError("baseline scan cannot start below 0 km")
        if self.variable is ScanVariable.L_OVER_E:
            if self.start < 0:
                raise ConfigError("L/E scan cannot start below 0")
            if self.vary_energy and self.start <= 0:
                raise ConfigError("--vary-energy needs a strictly positive L/E start")


DEFAULT_VALIDATION_POINTS = 1000
DEFAULT_VALIDATION_TIMES = 10
DEFAULT_VALIDATION_SEED = 20250903


@dataclass
class ValidationSpec:
    """Grid of the validate command: random draws × baselines"""
    points: int = DEFAULT_VALIDATION_POINTS
    times: int = DEFAULT_VALIDATION_TIMES
    seed: int = DEFAULT_VALIDATION_SEED
    inject_fault: bool = False

    def validate(self) -> None:
        if self.points < 1:
            raise ConfigError(f"points must be at least 1, got {self.points}")
        if self.times < 1:
            raise ConfigError(f"times must be at least 1, got {self.times}")


@dataclass
class RunConfig:
    """Complete configuration of one nhosc run"""
    method: Method = Method.DENSITY_ANALYTIC
    params: UserParams = field(default_factory=UserParams)
    scan: ScanSpec = field(default_factory=ScanSpec)
    units_mode: UnitsMode = UnitsMode.EXACT
    output_path: Optional[Path] = None
    output_format: OutputFormat = OutputFormat.CSV
    initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS
    static_metric: bool = False
    appendix_verbatim: bool = False
    steps_per_period: int = 2000
    validation: ValidationSpec = field(default_factory=ValidationSpec)

    def validate(self) -> None:
        self.scan.validate()
        self.validation.validate()
        if self.params.energy <= 0:
            raise ConfigError(f"energy must be positive, got {self.params.energy}")
        if self.appendix_verbatim and self.units_mode is not UnitsMode.PAPER_ROUNDED:
            raise ConfigError("--appendix-verbatim is only available with --units-mode paper")
        if self.appendix_verbatim and self.method is not Method.DENSITY_ANALYTIC:
            raise ConfigError("--appendix-verbatim applies to the density-analytic method only")
        if self.static_metric and self.method is not Method.G_METRIC:
            raise ConfigError("--static-metric applies to the g-metric method only")
        if (self.initial_states is InitialStates.FLAVOR_BASIS
                and self.method in (Method.G_METRIC, Method.DENSITY_ANALYTIC)):
            raise ConfigError("flavor-basis initial states apply to density-trace and density-rk4 only")
        if self.params.uses_angles() and self.method is Method.G_METRIC:
            raise ConfigError("alpha / beta parameterize the density framework; g-metric needs tau, tau_p or kappa")
        if self.steps_per_period < 16:
            raise ConfigError(f"steps_per_period must be at least 16, got {self.steps_per_period}")

    def to_dict(self) -> Dict[str, Any]:
        """Flat, JSON-friendly view (the same keys a config file uses)"""
        data: Dict[str, Any] = {'method': self.method.value}
        data.update(asdict(self.params))
        scan = asdict(self.scan)
        scan['scan'] = self.scan.variable.value
        scan.pop('variable')
        scan['baseline'] = scan.pop('baseline_km')
        scan['kappa_range'] = list(self.scan.kappa_range)
        scan['sigma_range'] = list(self.scan.sigma_range)
        data.update(scan)
        data.update(
            units_mode=self.units_mode.value,
            out=str(self.output_path) if self.output_path else None,
            format=self.output_format.value,
            initial_states=self.initial_states.value,
            static_metric=self.static_metric,
            appendix_verbatim=self.appendix_verbatim,
            steps_per_period=self.steps_per_period,
        )
        data.update(asdict(self.validation))
        return data


@dataclass(frozen=True)
class ScanRow:
    """One emitted sample of a probability sweep"""
    x: float
    p_aa: float
    p_ab: float
    p_ba: float
    p_bb: float
    sum_a: float
    sum_b: float
    regime: str
    error: str = ""

    @classmethod
    def from_quad(cls, x: float, quad: ProbabilityQuad, regime: str) -> 'ScanRow':
        return cls(x, quad.p_aa, quad.p_ab, quad.p_ba, quad.p_bb,
                   quad.sum_a, quad.sum_b, regime)

    @classmethod
    def failed(cls, x: float, regime: str, error: str) -> 'ScanRow':
        nan = float('nan')
        return cls(x, nan, nan, nan, nan, nan, nan, regime, error or "error")


SCAN_ROW_COLUMNS = ['x', 'p_aa', 'p_ab', 'p_ba', 'p_bb', 'sum_a', 'sum_b', 'regime', 'error']
PHASE_MAP_COLUMNS = ['kappa', 'sigma', 'regime', 'discriminant']


__all__ = [
    'Method',
    'ScanVariable',
    'OutputFormat',
    'UserParams',
    'ScanSpec',
    'ValidationSpec',
    'RunConfig',
    'DEFAULT_VALIDATION_POINTS',
    'DEFAULT_VALIDATION_TIMES',
    'DEFAULT_VALIDATION_SEED',
    'ScanRow',
    'SCAN_ROW_COLUMNS',
    'PHASE_MAP_COLUMNS',
]
