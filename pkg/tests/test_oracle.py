"""
Tests for the RK4 master-equation oracle
"""

import math

import numpy as np
import pytest

from automation.oracle import (
    IntegrationConfig,
    characteristic_frequency,
    integrate_density_path,
    integrate_density_rk4,
    probabilities_rk4,
    step_count,
)
from core.brodygraefe import (
    closed_form_probabilities,
    evolve_density,
    initial_density,
    probabilities_from_hamiltonian,
)
from core.model import build_hamiltonian
from models.errors import InvalidParamsError
from models.oscillation import FlavorLabel, InitialStates, OscillationParams
from utils.units import UnitsMode, km_to_inverse_gev

HERMITIAN_H = np.array([[-0.5, 0.3], [0.3, 0.5]], dtype=np.complex128)


def _max_dev(rho, other):
    return float(np.max(np.abs(np.asarray(rho.m) - np.asarray(other.m))))


def test_config_validation():
    with pytest.raises(InvalidParamsError):
        IntegrationConfig(steps_per_period=8)
    with pytest.raises(InvalidParamsError):
        IntegrationConfig(state_tol=0.0)


def test_step_count():
    assert step_count(0.0, 1.0, 100) == 0
    assert step_count(1.0, 0.0, 100) == 1
    assert step_count(2 * math.pi, 1.0, 100) == 100
    assert step_count(2 * math.pi * 1.5, 1.0, 100) == 150
    assert step_count(2 * math.pi * 1.001, 1.0, 100) == 101


def test_zero_time_returns_initial_state():
    rho0 = initial_density(0.4, FlavorLabel.A)
    assert integrate_density_rk4(HERMITIAN_H, rho0, 0.0) is rho0


def test_rejects_bad_time_grids():
    rho0 = initial_density(0.4, FlavorLabel.A)
    with pytest.raises(InvalidParamsError):
        integrate_density_path(HERMITIAN_H, rho0, [-1.0])
    with pytest.raises(InvalidParamsError):
        integrate_density_path(HERMITIAN_H, rho0, [2.0, 1.0])


def test_hermitian_state_returns_after_one_period():
    delta = math.sqrt(0.5 ** 2 + 0.3 ** 2)
    rho0 = initial_density(0.4, FlavorLabel.A, InitialStates.FLAVOR_BASIS)
    rho = integrate_density_rk4(HERMITIAN_H, rho0, math.pi / delta)
    assert _max_dev(rho, rho0) <= 1e-9


def test_renormalization_does_not_change_the_result():
    H = np.array([[0.1j, 0.25], [0.25, -0.1j]])
    rho0 = initial_density(math.pi / 4, FlavorLabel.A)
    plain = integrate_density_rk4(H, rho0, 20.0, IntegrationConfig(renormalize_each_step=False))
    renormalized = integrate_density_rk4(H, rho0, 20.0)
    assert _max_dev(plain, renormalized) <= 1e-9


def test_fourth_order_convergence():
    p = OscillationParams(energy_E=1.0, dm2=1.0, theta=math.pi / 4, kappa=0.5, phi=math.pi / 2)
    rho0 = initial_density(p.theta, FlavorLabel.A)
    H = build_hamiltonian(p)
    period = 2 * math.pi / characteristic_frequency(H)
    exact = evolve_density(H, rho0, period)

    errors = []
    for spp in (64, 128):
        cfg = IntegrationConfig(steps_per_period=spp, state_tol=1e-3)
        errors.append(_max_dev(integrate_density_rk4(p, rho0, period, cfg), exact))
    assert 12.0 <= errors[0] / errors[1] <= 20.0


def test_rk4_matches_analytic_on_angle_parameterized_sweep(fig3_closed_form):
    cf = fig3_closed_form
    H = cf.effective_hamiltonian()
    times = [km_to_inverse_gev(L, UnitsMode.PAPER_ROUNDED) for L in np.linspace(0.0, 3000.0, 100)]
    rk4 = probabilities_rk4(H, cf.theta, times)
    for t, quad in zip(times, rk4):
        assert quad.max_abs_diff(closed_form_probabilities(cf, t)) <= 1e-8
        assert quad.max_abs_diff(probabilities_from_hamiltonian(H, cf.theta, t)) <= 1e-8


def test_rk4_path_equals_single_shot_integration(fig2_broken):
    rho0 = initial_density(fig2_broken.theta, FlavorLabel.B)
    times = [km_to_inverse_gev(L) for L in (0.0, 400.0, 800.0)]
    path = integrate_density_path(fig2_broken, rho0, times)
    single = integrate_density_rk4(fig2_broken, rho0, times[-1])
    assert _max_dev(path[-1], single) <= 1e-8
    assert _max_dev(path[-1], evolve_density(build_hamiltonian(fig2_broken), rho0, times[-1])) <= 1e-8
