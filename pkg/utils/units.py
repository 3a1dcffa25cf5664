#!/usr/bin/env python3
"""
📏 Units - Natural-unit conversions for oscillation baselines
Date: 03/09/2025
Description: eV² ↔ GeV², km → GeV⁻¹ and the rounded / exact phase factors.

Internally every mass-squared is in GeV², every energy in GeV and every time in
GeV⁻¹. Users speak eV², GeV and km.
"""

import math
import re
from enum import Enum
from typing import Union

# ħc in GeV·km
HBARC_GEV_KM = 1.973269804e-19

# 1 km in GeV⁻¹
KM_IN_INVERSE_GEV = 1.0 / HBARC_GEV_KM

EV2_PER_GEV2 = 1e18

# 1/(4ħc) in km⁻¹·GeV·eV⁻²
EXACT_PHASE_FACTOR = 1.0 / (4.0 * HBARC_GEV_KM * EV2_PER_GEV2)
PAPER_PHASE_FACTOR = 1.27


class UnitsMode(Enum):
    """Phase-factor convention"""
    PAPER_ROUNDED = "paper"
    EXACT = "exact"


def ev2_to_gev2(value_ev2: float) -> float:
    """eV² → GeV²; gev2_to_ev2 undoes it to within one ulp"""
    return value_ev2 / EV2_PER_GEV2


def gev2_to_ev2(value_gev2: float) -> float:
    return value_gev2 * EV2_PER_GEV2


def phase_factor(mode: UnitsMode) -> float:
    """Factor f with Δm²t/4E = f·Δm²[eV²]·L[km]/E[GeV]"""
    if mode is UnitsMode.PAPER_ROUNDED:
        return PAPER_PHASE_FACTOR
    return EXACT_PHASE_FACTOR


def double_phase_factor(mode: UnitsMode) -> float:
    """2.54 in paper mode, 1/(2ħc) otherwise"""
    return 2.0 * phase_factor(mode)


def km_to_inverse_gev(length_km: float, mode: UnitsMode = UnitsMode.EXACT) -> float:
    """Baseline in km → propagation time in GeV⁻¹.

    Paper mode uses t = 4·1.27e18·L so that every phase built from t carries the
    rounded 1.27 exactly.
    """
    if mode is UnitsMode.PAPER_ROUNDED:
        return length_km * 4.0 * PAPER_PHASE_FACTOR * EV2_PER_GEV2
    return length_km * KM_IN_INVERSE_GEV


def inverse_gev_to_km(time_inv_gev: float, mode: UnitsMode = UnitsMode.EXACT) -> float:
    if mode is UnitsMode.PAPER_ROUNDED:
        return time_inv_gev / (4.0 * PAPER_PHASE_FACTOR * EV2_PER_GEV2)
    return time_inv_gev * HBARC_GEV_KM


_PI_FRACTION = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<num>\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d*\.?\d+(?:[eE][+-]?\d+)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(value: Union[str, float, int]) -> float:
    """Parse '0.52', 'pi/6', '2pi/3', '-pi/4', 'π/3' or '2*pi/3' into radians"""
    if isinstance(value, (int, float)):
        return float(value)

    text = str(value).strip()
    match = _PI_FRACTION.match(text)
    if match:
        numerator = float(match.group('num')) if match.group('num') else 1.0
        denominator = float(match.group('den')) if match.group('den') else 1.0
        if denominator == 0.0:
            raise ValueError(f"Zero denominator in angle: {value!r}")
        angle = numerator * math.pi / denominator
        return -angle if match.group('sign') == '-' else angle

    try:
        return float(text)
    except ValueError:
        raise ValueError(f"Cannot parse angle: {value!r}") from None
