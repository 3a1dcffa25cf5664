"""
Tests for the Hamiltonian builder, its Hermitian split and the PT regimes
"""

import math

import numpy as np
import pytest

from automation.invariants import frame_draws
from conftest import DM2_GEV2, random_general_params
from core.linalg2 import eig2, frobenius_norm, is_hermitian
from core.model import (
    build_hamiltonian,
    classify_regime,
    eigenvalues_general,
    hermitian_split,
    mixing_terms,
    pt_commutator_check,
)
from models.errors import InvalidParamsError, NotPTSymmetricError, UnsupportedChiError
from models.oscillation import OscillationParams, PTChoice, RegimeKind


def test_mixing_terms_exact_at_quarter_pi():
    assert mixing_terms(math.pi / 4) == (0.0, 1.0)
    c, s = mixing_terms(0.3)
    assert c == pytest.approx(math.cos(0.6))
    assert s == pytest.approx(math.sin(0.6))


def test_params_validation():
    with pytest.raises(InvalidParamsError):
        OscillationParams(energy_E=0.0, dm2=DM2_GEV2, theta=0.5)
    with pytest.raises(InvalidParamsError):
        OscillationParams(energy_E=1.0, dm2=DM2_GEV2, theta=2.0)
    with pytest.raises(InvalidParamsError):
        OscillationParams(energy_E=1.0, dm2=float('nan'), theta=0.5)


def test_vacuum_hamiltonian_is_hermitian(hermitian_params):
    H = build_hamiltonian(hermitian_params)
    assert is_hermitian(H)
    split = hermitian_split(H)
    assert frobenius_norm(split.C) == 0.0


def test_hermitian_split_reconstructs(rng):
    for _ in range(20):
        H = build_hamiltonian(random_general_params(rng, chi=rng.uniform(0, 2 * math.pi)))
        split = hermitian_split(H)
        assert is_hermitian(split.B) and is_hermitian(split.C)
        assert np.allclose(split.reconstruct(), H, rtol=0, atol=1e-14 * frobenius_norm(H))


def test_closed_form_eigenvalues_match_generic(rng):
    for _ in range(50):
        p = random_general_params(rng)
        expected = eig2(build_hamiltonian(p))
        plus, minus = eigenvalues_general(p)
        scale = frobenius_norm(build_hamiltonian(p))
        assert abs(plus - expected.lambda_plus) <= 1e-12 * scale
        assert abs(minus - expected.lambda_minus) <= 1e-12 * scale


def test_eigenvalues_reject_chi(rng):
    with pytest.raises(UnsupportedChiError):
        eigenvalues_general(random_general_params(rng, chi=0.3))


@pytest.mark.parametrize("choice", list(PTChoice))
def test_pt_symmetric_hamiltonian_commutes(fig2_unbroken, fig2_broken, choice):
    for p in (fig2_unbroken, fig2_broken):
        assert pt_commutator_check(p, choice) <= 1e-12 * frobenius_norm(build_hamiltonian(p))


def test_non_pt_hamiltonian_does_not_commute():
    p = OscillationParams.from_user_units(1.0, 2.5e-3, theta=0.5, kappa_eV2=1e-3, phi=1.0)
    H = build_hamiltonian(p)
    assert pt_commutator_check(p, PTChoice.SIGMA_X_K) > 1e-3 * frobenius_norm(H)


def test_regimes(hermitian_params, fig2_unbroken, fig2_broken, exceptional_params):
    vacuum = OscillationParams.from_user_units(1.0, 2.5e-3, theta=math.pi / 4)
    assert classify_regime(vacuum).kind is RegimeKind.UNBROKEN
    assert classify_regime(fig2_unbroken).kind is RegimeKind.UNBROKEN
    assert classify_regime(fig2_broken).kind is RegimeKind.BROKEN
    assert classify_regime(exceptional_params).kind is RegimeKind.EXCEPTIONAL
    assert classify_regime(fig2_unbroken).discriminant > 0
    assert classify_regime(fig2_broken).discriminant < 0
    with pytest.raises(NotPTSymmetricError):
        classify_regime(hermitian_params)


def test_unbroken_regime_has_real_energies(fig2_unbroken, fig2_broken):
    plus, minus = eigenvalues_general(fig2_unbroken)
    assert abs(plus.imag) <= 1e-12 * abs(plus)
    plus, minus = eigenvalues_general(fig2_broken)
    assert plus.imag > 0 > minus.imag


def test_regime_energy_symmetry(rng):
    unbroken, broken = frame_draws(rng, 1000)
    for p in unbroken:
        plus, minus = eigenvalues_general(p)
        assert max(abs(plus.imag), abs(minus.imag)) <= 1e-12 * max(abs(plus), abs(minus))
    for p in broken:
        plus, minus = eigenvalues_general(p)
        assert abs(plus - minus.conjugate()) <= 1e-12 * max(abs(plus), abs(minus))
        assert plus.imag > 0 > minus.imag
