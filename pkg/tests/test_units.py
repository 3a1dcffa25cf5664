"""
Tests for unit conversions and angle parsing
"""

import math

import numpy as np
import pytest

from automation.config_loader import run_config_from_mapping
from utils.units import (
    EXACT_PHASE_FACTOR,
    HBARC_GEV_KM,
    UnitsMode,
    double_phase_factor,
    ev2_to_gev2,
    gev2_to_ev2,
    inverse_gev_to_km,
    km_to_inverse_gev,
    parse_angle,
    phase_factor,
)


def test_ev2_round_trip_within_one_ulp():
    # 1e18 is not a power of two, so binary64 gives one ulp at most
    rng = np.random.default_rng(7)
    for value in 10.0 ** rng.uniform(-8.0, 0.0, size=10000):
        value = float(value)
        assert abs(gev2_to_ev2(ev2_to_gev2(value)) - value) <= math.ulp(value)


def test_user_units_survive_a_config_round_trip():
    cfg = run_config_from_mapping({'dm2': 7.4e-5, 'kappa': 3.3e-7, 'sigma': -1.1e-4})
    data = cfg.to_dict()
    assert (data['dm2'], data['kappa'], data['sigma']) == (7.4e-5, 3.3e-7, -1.1e-4)


def test_exact_time_conversion_matches_hbar_c():
    assert km_to_inverse_gev(1.0) == pytest.approx(5.0677307e18, rel=1e-7)
    assert inverse_gev_to_km(km_to_inverse_gev(295.0)) == pytest.approx(295.0, rel=1e-14)


def test_paper_mode_time_carries_rounded_factor():
    t = km_to_inverse_gev(1000.0, UnitsMode.PAPER_ROUNDED)
    dm2_gev2, energy = ev2_to_gev2(2.5e-3), 1.0
    assert dm2_gev2 * t / (4 * energy) == pytest.approx(1.27 * 2.5e-3 * 1000.0, rel=1e-14)
    assert inverse_gev_to_km(t, UnitsMode.PAPER_ROUNDED) == pytest.approx(1000.0, rel=1e-14)


def test_phase_factors():
    assert phase_factor(UnitsMode.PAPER_ROUNDED) == 1.27
    assert double_phase_factor(UnitsMode.PAPER_ROUNDED) == pytest.approx(2.54)
    assert EXACT_PHASE_FACTOR == pytest.approx(1.0 / (4 * HBARC_GEV_KM * 1e18))
    assert phase_factor(UnitsMode.EXACT) == pytest.approx(1.2669, abs=1e-4)


@pytest.mark.parametrize("text, expected", [
    ("pi/6", math.pi / 6),
    ("2pi/3", 2 * math.pi / 3),
    ("2*pi/3", 2 * math.pi / 3),
    ("-pi/4", -math.pi / 4),
    ("π/3", math.pi / 3),
    ("pi", math.pi),
    ("0.52", 0.52),
    (0.25, 0.25),
])
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text", ["pie/3", "pi/0", "abc", ""])
def test_parse_angle_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_modes_differ_only_in_the_phase_constant():
    paper = km_to_inverse_gev(812.0, UnitsMode.PAPER_ROUNDED)
    exact = km_to_inverse_gev(812.0, UnitsMode.EXACT)
    assert paper / exact == pytest.approx(1.27 / EXACT_PHASE_FACTOR, rel=1e-14)
