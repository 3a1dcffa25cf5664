#!/usr/bin/env python3
"""
🧪 oracle - Fixed-step RK4 integration of the density master equation
Date: 03/09/2025
Description: Independent numerical reference for the analytic density solution.
Integrates dρ/dt = −i[B,ρ] − {C,ρ} + 2Tr(ρC)ρ with classical RK4, either to a
single time or along a sorted time grid.
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from core.brodygraefe import (
    DensityMatrix,
    density_rhs_array,
    initial_density,
    probability_trace,
)
from core.linalg2 import CMat2, as_cmat2, frobenius_norm
from core.model import build_hamiltonian, hermitian_split
from models.errors import InvalidParamsError, NonFiniteError
from models.oscillation import FlavorLabel, InitialStates, OscillationParams, ProbabilityQuad
from utils.logger import setup_logger

logger = setup_logger('oracle')

DEFAULT_STEPS_PER_PERIOD = 2000
MIN_STEPS_PER_PERIOD = 16
DEFAULT_STATE_TOL = 1e-8
STEP_ROUNDING_SLACK = 1e-9

System = Union[OscillationParams, CMat2]


@dataclass(frozen=True)
class IntegrationConfig:
    """RK4 resolution settings.

    state_tol is the tolerance the integrated states are validated against as
    density matrices; coarse grids need a looser value.
    """
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD
    renormalize_each_step: bool = True
    state_tol: float = DEFAULT_STATE_TOL

    def __post_init__(self):
        if self.steps_per_period < MIN_STEPS_PER_PERIOD:
            raise InvalidParamsError(
                f"steps_per_period must be at least {MIN_STEPS_PER_PERIOD}, got {self.steps_per_period}")
        if not self.state_tol > 0:
            raise InvalidParamsError(f"state_tol must be positive, got {self.state_tol}")


def _hamiltonian(system: System) -> np.ndarray:
    if isinstance(system, OscillationParams):
        return np.asarray(build_hamiltonian(system))
    return np.asarray(as_cmat2(system))


def characteristic_frequency(H: CMat2) -> float:
    """‖H − (trH/2)I‖_F, an upper scale for every rate of the flow"""
    H = np.asarray(H)
    return frobenius_norm(H - 0.5 * (H[0, 0] + H[1, 1]) * np.eye(2))


def step_count(duration: float, frequency: float, steps_per_period: int) -> int:
    """⌈|duration|/T · steps_per_period⌉ with T = 2π/frequency"""
    if duration == 0.0:
        return 0
    if frequency == 0.0:
        return 1
    periods = abs(duration) * frequency / (2.0 * math.pi)
    return max(1, math.ceil(periods * steps_per_period - STEP_ROUNDING_SLACK))


class _MasterEquationStepper:
    """RK4 stepper over the traceless part of H.

    A multiple of the identity in H drops out of the normalized flow.
    """

    def __init__(self, H: np.ndarray, cfg: IntegrationConfig):
        traceless = H - 0.5 * (H[0, 0] + H[1, 1]) * np.eye(2)
        split = hermitian_split(as_cmat2(traceless))
        self.B = np.asarray(split.B)
        self.C = np.asarray(split.C)
        self.frequency = frobenius_norm(traceless)
        self.cfg = cfg
        self.steps_taken = 0

    def _step(self, rho: np.ndarray, h: float) -> np.ndarray:
        k1 = density_rhs_array(self.B, self.C, rho)
        k2 = density_rhs_array(self.B, self.C, rho + 0.5 * h * k1)
        k3 = density_rhs_array(self.B, self.C, rho + 0.5 * h * k2)
        k4 = density_rhs_array(self.B, self.C, rho + h * k3)
        return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def advance(self, rho: np.ndarray, duration: float) -> np.ndarray:
        n = step_count(duration, self.frequency, self.cfg.steps_per_period)
        if n == 0:
            return rho

        h = duration / n
        for _ in range(n):
            rho = self._step(rho, h)
            rho = 0.5 * (rho + np.conj(rho).T)
            if self.cfg.renormalize_each_step:
                rho = rho / np.real(rho[0, 0] + rho[1, 1])

        if not np.all(np.isfinite(rho)):
            raise NonFiniteError(f"RK4 state diverged over {duration:g} GeV⁻¹; raise steps_per_period")
        self.steps_taken += n
        return rho

    def to_density(self, rho: np.ndarray) -> DensityMatrix:
        return DensityMatrix(rho, tol=self.cfg.state_tol)


def integrate_density_path(system: System, rho0: DensityMatrix, times: Sequence[float],
                           cfg: IntegrationConfig = IntegrationConfig()) -> List[DensityMatrix]:
    """Integrate once along a non-decreasing grid of times ≥ 0, returning ρ at each"""
    times = [float(t) for t in times]
    if any(not math.isfinite(t) for t in times):
        raise NonFiniteError("time grid contains NaN or Inf")
    if any(t < 0 for t in times):
        raise InvalidParamsError("RK4 integration runs forward from t = 0 only")
    if any(b < a for a, b in zip(times, times[1:])):
        raise InvalidParamsError("time grid must be sorted")

    stepper = _MasterEquationStepper(_hamiltonian(system), cfg)
    rho = np.array(rho0.m)
    current = 0.0
    states = []
    for t in times:
        rho = stepper.advance(rho, t - current)
        current = t
        states.append(rho0 if t == 0.0 else stepper.to_density(rho))

    logger.debug(f"RK4 path: {len(times)} samples, {stepper.steps_taken} steps")
    return states


def integrate_density_rk4(system: System, rho0: DensityMatrix, t_end: float,
                          cfg: IntegrationConfig = IntegrationConfig()) -> DensityMatrix:
    return integrate_density_path(system, rho0, [t_end], cfg)[0]


def probabilities_rk4(system: System, theta: float, times: Sequence[float],
                      cfg: IntegrationConfig = IntegrationConfig(),
                      initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS
                      ) -> List[ProbabilityQuad]:
    """Trace probabilities of the RK4 states at every time"""
    rho_a0 = initial_density(theta, FlavorLabel.A, initial_states)
    rho_b0 = initial_density(theta, FlavorLabel.B, initial_states)
    path_a = integrate_density_path(system, rho_a0, times, cfg)
    path_b = integrate_density_path(system, rho_b0, times, cfg)
    return [
        ProbabilityQuad(
            p_aa=probability_trace(rho_a0, rho_a),
            p_ab=probability_trace(rho_b0, rho_a),
            p_ba=probability_trace(rho_a0, rho_b),
            p_bb=probability_trace(rho_b0, rho_b),
        )
        for rho_a, rho_b in zip(path_a, path_b)
    ]


__all__ = [
    'DEFAULT_STEPS_PER_PERIOD',
    'IntegrationConfig',
    'characteristic_frequency',
    'step_count',
    'integrate_density_path',
    'integrate_density_rk4',
    'probabilities_rk4',
]
