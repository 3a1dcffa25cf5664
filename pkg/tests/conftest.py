"""
🧪 Shared pytest fixtures
Date: 03/09/2025
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.brodygraefe import ClosedFormParams
from core.gmetric import kappa_from_tau, kappa_from_tau_p
from models.oscillation import OscillationParams

DM2_EV2 = 2.5e-3
DM2_GEV2 = 2.5e-21


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def hermitian_params():
    return OscillationParams.from_user_units(energy_GeV=1.0, dm2_eV2=DM2_EV2, theta=0.6)


@pytest.fixture
def fig2_unbroken():
    """σ = 0, τ = π/6, Δm² = 2.5e-21 GeV², E = 1 GeV"""
    return OscillationParams(energy_E=1.0, dm2=DM2_GEV2, theta=math.pi / 4,
                             kappa=kappa_from_tau(DM2_GEV2, 0.0, math.pi / 6),
                             phi=math.pi / 2)


@pytest.fixture
def fig2_broken():
    """σ = 0, τ′ = π/6"""
    return OscillationParams(energy_E=1.0, dm2=DM2_GEV2, theta=math.pi / 4,
                             kappa=kappa_from_tau_p(DM2_GEV2, 0.0, math.pi / 6),
                             phi=math.pi / 2)


@pytest.fixture
def exceptional_params():
    """κ sinφ = σ + Δm² with φ = π/6, σ = 0"""
    return OscillationParams.from_user_units(energy_GeV=1.0, dm2_eV2=DM2_EV2, theta=math.pi / 4,
                                             kappa_eV2=5e-3, phi=math.pi / 6)


@pytest.fixture
def fig3_closed_form():
    return ClosedFormParams.from_angles(math.pi / 6, math.pi / 3, math.pi / 3, DM2_GEV2, 0.0, 1.0)


@pytest.fixture
def fig4_closed_form():
    return ClosedFormParams.from_angles(math.pi / 6, math.pi / 3, math.pi / 4, DM2_GEV2, 0.0, 1.0)


def random_pt_params(rng, energy_E=1.0, scale=DM2_GEV2):
    """θ = π/4, χ = 0 draw spanning both regimes"""
    sigma = rng.uniform(-0.3, 0.3) * scale
    phi = rng.uniform(0.2, math.pi - 0.2)
    gain = rng.uniform(0.0, 2.0) * (scale + sigma)
    return OscillationParams(energy_E=energy_E, dm2=scale, theta=math.pi / 4,
                             kappa=gain / math.sin(phi), sigma=sigma, phi=phi)


def random_general_params(rng, chi=0.0, scale=DM2_GEV2):
    return OscillationParams(
        energy_E=rng.uniform(0.5, 2.0),
        dm2=scale,
        theta=rng.uniform(0.1, math.pi / 2 - 0.1),
        kappa=rng.uniform(0.0, 1.5) * scale,
        sigma=rng.uniform(-0.05, 0.3) * scale,
        phi=rng.uniform(0.0, 2 * math.pi),
        chi=chi,
    )
