"""
Tests for the G-metric (bi-orthonormal) probability framework
"""

import math

import numpy as np
import pytest

from conftest import DM2_EV2, DM2_GEV2, random_pt_params
from core.gmetric import (
    BrokenFrame,
    UnbrokenFrame,
    broken_frame,
    frame_for,
    g_metric_static,
    kappa_from_tau,
    probabilities_broken,
    probabilities_broken_LE,
    probabilities_g_pipeline,
    probabilities_unbroken,
    probabilities_unbroken_LE,
    unbroken_frame,
)
from automation.invariants import frame_deviations, frame_draws
from core.linalg2 import outer
from core.model import build_hamiltonian, classify_regime
from models.errors import InvalidParamsError, WrongRegimeError
from models.oscillation import OscillationParams
from utils.units import UnitsMode, km_to_inverse_gev


def _random_frames(rng, count=200):
    frames = []
    while len(frames) < count:
        p = random_pt_params(rng)
        regime = classify_regime(p)
        # stay clear of the exceptional point, where the frames are ill-conditioned
        if abs(regime.discriminant) > 0.1 * (p.dm2 + p.sigma) ** 2:
            frames.append((p, frame_for(p)))
    return frames


def test_bi_orthonormality_and_completeness(rng):
    unbroken, broken = frame_draws(rng, 1000)
    assert len(unbroken) == len(broken) == 1000
    for builder, draws in ((unbroken_frame, unbroken), (broken_frame, broken)):
        for p in draws:
            orthonormality, completeness = frame_deviations(builder(p))
            assert orthonormality <= 1e-12
            assert completeness <= 1e-12


def test_right_eigenvectors(rng):
    for p, frame in _random_frames(rng, count=50):
        H = np.asarray(build_hamiltonian(p))
        e_plus, e_minus = frame.energies
        scale = np.linalg.norm(H)
        assert np.allclose(H @ frame.u_plus, e_plus * frame.u_plus, rtol=0, atol=1e-12 * scale)
        assert np.allclose(H @ frame.u_minus, e_minus * frame.u_minus, rtol=0, atol=1e-12 * scale)


def test_static_metric_is_inverse_right_gram(rng):
    for _, frame in _random_frames(rng, count=50):
        gram = np.asarray(outer(frame.u_plus, frame.u_plus)) + outer(frame.u_minus, frame.u_minus)
        assert np.allclose(np.asarray(g_metric_static(frame)) @ gram, np.eye(2), rtol=0, atol=1e-10)


def test_frame_types(fig2_unbroken, fig2_broken, exceptional_params):
    assert isinstance(frame_for(fig2_unbroken), UnbrokenFrame)
    assert isinstance(frame_for(fig2_broken), BrokenFrame)
    assert frame_for(fig2_unbroken).tau == pytest.approx(math.pi / 6, rel=1e-14)
    assert frame_for(fig2_broken).tau_p == pytest.approx(math.pi / 6, rel=1e-12)
    with pytest.raises(WrongRegimeError):
        frame_for(exceptional_params)
    with pytest.raises(WrongRegimeError):
        unbroken_frame(fig2_broken)
    with pytest.raises(WrongRegimeError):
        broken_frame(fig2_unbroken)


def test_unbroken_initial_values(fig2_unbroken):
    quad = probabilities_unbroken(fig2_unbroken, 0.0)
    assert quad.p_aa == pytest.approx(1.0)
    assert quad.p_ab == pytest.approx(0.25, abs=1e-14)
    assert quad.p_ba == pytest.approx(0.25, abs=1e-14)


def test_unbroken_probabilities_are_not_conserved(fig2_unbroken):
    frame = unbroken_frame(fig2_unbroken)
    deficits = []
    for L in np.linspace(0.0, 1.0e5, 2001):
        t = km_to_inverse_gev(L, UnitsMode.PAPER_ROUNDED)
        quad = probabilities_unbroken(fig2_unbroken, t)
        deficit = abs(quad.sum_a - 1.0)
        phase = frame.zeta * t
        assert deficit == pytest.approx(abs(math.sin(frame.tau - phase) ** 2 - math.sin(phase) ** 2), abs=1e-12)
        deficits.append(deficit)
    assert max(deficits) >= 0.2


def test_broken_asymptote(fig2_broken):
    frame = broken_frame(fig2_broken)
    quad = probabilities_broken(fig2_broken, 20.0 / frame.zeta_p)
    tau_p = frame.tau_p
    low = math.exp(-tau_p) / (2 * math.cosh(tau_p))
    high = math.exp(tau_p) / (2 * math.cosh(tau_p))
    assert quad.p_aa == pytest.approx(low, abs=1e-8)
    assert quad.p_ab == pytest.approx(low, abs=1e-8)
    assert quad.p_ba == pytest.approx(high, abs=1e-8)
    assert quad.p_bb == pytest.approx(high, abs=1e-8)


def test_broken_far_future_stays_finite(fig2_broken):
    frame = broken_frame(fig2_broken)
    quad = probabilities_broken(fig2_broken, 1.0e4 / frame.zeta_p)
    assert all(math.isfinite(v) for v in quad.as_tuple())


def _scaled_times(rate):
    return [x / abs(rate) for x in (0.0, 0.3, 1.1, 2.0, 3.0)]


def test_unbroken_closed_form_matches_pipeline(rng):
    unbroken, _ = frame_draws(rng, 1000)
    for p in unbroken:
        for t in _scaled_times(unbroken_frame(p).zeta):
            assert probabilities_unbroken(p, t).max_abs_diff(probabilities_g_pipeline(p, t)) <= 1e-12


def test_broken_closed_form_matches_pipeline(rng):
    _, broken = frame_draws(rng, 1000)
    for p in broken:
        for t in _scaled_times(broken_frame(p).zeta_p):
            assert probabilities_broken(p, t).max_abs_diff(probabilities_g_pipeline(p, t)) <= 1e-11


def test_static_metric_closed_form_matches_pipeline(rng):
    _, broken = frame_draws(rng, 200)
    for p in broken:
        for t in _scaled_times(broken_frame(p).zeta_p):
            closed = probabilities_broken(p, t, static_metric=True)
            assert closed.max_abs_diff(probabilities_g_pipeline(p, t, static_metric=True)) <= 1e-10


def test_unitarity_is_restored_without_gain(rng):
    unbroken, _ = frame_draws(rng, 200)
    for p in unbroken:
        restored = p.with_changes(kappa=0.0)
        assert unbroken_frame(restored).tau == 0.0
        for t in _scaled_times(unbroken_frame(restored).zeta):
            quad = probabilities_g_pipeline(restored, t)
            assert abs(quad.sum_a - 1.0) <= 1e-12
            assert abs(quad.sum_b - 1.0) <= 1e-12


def test_probability_deficit_follows_tau(fig2_unbroken):
    frame = unbroken_frame(fig2_unbroken)
    for x in np.linspace(0.0, 3.0, 13):
        t = x / frame.zeta
        quad = probabilities_g_pipeline(fig2_unbroken, t)
        deficit = math.sin(frame.tau - x) ** 2 - math.sin(x) ** 2
        assert quad.sum_a - 1.0 == pytest.approx(deficit, abs=1e-12)


def test_baseline_energy_forms_match_natural_units(fig2_unbroken, fig2_broken):
    tau_p = broken_frame(fig2_broken).tau_p
    for L in (0.0, 250.0, 1300.0, 2950.0):
        t = km_to_inverse_gev(L, UnitsMode.PAPER_ROUNDED)
        unbroken = probabilities_unbroken_LE(DM2_EV2, 0.0, math.pi / 6, L, 1.0)
        assert unbroken.max_abs_diff(probabilities_unbroken(fig2_unbroken, t)) <= 1e-10
        broken = probabilities_broken_LE(DM2_EV2, 0.0, tau_p, L, 1.0)
        assert broken.max_abs_diff(probabilities_broken(fig2_broken, t)) <= 1e-10


def test_baseline_energy_forms_reject_bad_energy():
    with pytest.raises(InvalidParamsError):
        probabilities_unbroken_LE(DM2_EV2, 0.0, 0.3, 100.0, 0.0)


def test_kappa_from_tau_needs_gain():
    with pytest.raises(InvalidParamsError):
        kappa_from_tau(DM2_GEV2, 0.0, 0.5, phi=0.0)
    p = OscillationParams(energy_E=1.0, dm2=DM2_GEV2, theta=math.pi / 4,
                          kappa=kappa_from_tau(DM2_GEV2, 0.0, 0.5, phi=1.0), phi=1.0)
    assert unbroken_frame(p).tau == pytest.approx(0.5, rel=1e-13)
