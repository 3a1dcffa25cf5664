#!/usr/bin/env python3
"""
⚛️ model - Non-Hermitian two-flavor Hamiltonian
Date: 03/09/2025
Description: Builds H = (1/4E)[vacuum + [[κe^{iφ}, σe^{iχ}], [σe^{-iχ}, κe^{-iφ}]]],
splits it into B − iC, computes spectra, classifies the PT regimes and checks
PT commutation for the two (P, T) choices.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from models.errors import NotPTSymmetricError, UnsupportedChiError
from models.oscillation import (
    DEFAULT_REGIME_TOL,
    PT_THETA_TOL,
    QUARTER_PI,
    OscillationParams,
    PTChoice,
    Regime,
    RegimeKind,
)
from utils.logger import setup_logger
from .linalg2 import CMat2, Complex, as_cmat2, frobenius_norm, principal_sqrt

logger = setup_logger('model')

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

PT_OPERATORS = {
    PTChoice.SIGMA_X_K: SIGMA_X,
    PTChoice.SIGMA_Z_I_SIGMA_Y_K: SIGMA_Z @ (1j * SIGMA_Y),
}


def mixing_terms(theta: float) -> Tuple[float, float]:
    """(cos2θ, sin2θ), exactly (0, 1) at θ = π/4"""
    if abs(theta - QUARTER_PI) <= PT_THETA_TOL:
        return 0.0, 1.0
    return math.cos(2 * theta), math.sin(2 * theta)


@dataclass(frozen=True)
class HermitianSplit:
    """H = B − iC with B, C Hermitian"""
    B: CMat2
    C: CMat2

    def reconstruct(self) -> CMat2:
        return as_cmat2(self.B - 1j * self.C)


def build_hamiltonian(p: OscillationParams) -> CMat2:
    cos2t, sin2t = mixing_terms(p.theta)
    vacuum = np.array([
        [p.mbar2 - p.dm2 * cos2t, p.dm2 * sin2t],
        [p.dm2 * sin2t, p.mbar2 + p.dm2 * cos2t],
    ], dtype=np.complex128)

    diag_term = p.kappa * np.exp(1j * p.phi)
    off_term = p.sigma * np.exp(1j * p.chi)
    # conjugates taken explicitly so PT symmetry holds bit for bit
    non_hermitian = np.array([
        [diag_term, off_term],
        [np.conj(off_term), np.conj(diag_term)],
    ], dtype=np.complex128)

    return as_cmat2((vacuum + non_hermitian) / (4.0 * p.energy_E))


def hermitian_split(H: CMat2) -> HermitianSplit:
    H = as_cmat2(H)
    H_dag = np.conj(H).T
    return HermitianSplit(B=as_cmat2((H + H_dag) / 2), C=as_cmat2(1j * (H - H_dag) / 2))


def eigenvalues_general(p: OscillationParams) -> Tuple[Complex, Complex]:
    """E± = (κcosφ + m̄² ± √[(σ + Δm²sin2θ)² + (−iκsinφ + Δm²cos2θ)²]) / 4E"""
    if p.chi != 0.0:
        raise UnsupportedChiError("closed-form eigenvalues hold for χ = 0 only; use eig2(build_hamiltonian(p))")

    cos2t, sin2t = mixing_terms(p.theta)
    off = p.sigma + p.dm2 * sin2t
    diag = complex(p.dm2 * cos2t, -p.kappa * math.sin(p.phi))
    root = principal_sqrt(off * off + diag * diag)
    center = p.kappa * math.cos(p.phi) + p.mbar2
    scale = 4.0 * p.energy_E
    return (center + root) / scale, (center - root) / scale


def _require_pt(p: OscillationParams) -> None:
    if not p.is_pt_symmetric():
        raise NotPTSymmetricError(
            f"regimes are defined for θ = π/4, χ = 0 only (θ = {p.theta}, χ = {p.chi})")


def classify_regime(p: OscillationParams, tol: float = DEFAULT_REGIME_TOL) -> Regime:
    """Unbroken / Broken / Exceptional from (σ+Δm²)² − κ²sin²φ"""
    _require_pt(p)
    shifted = p.sigma + p.dm2
    gain = p.kappa * math.sin(p.phi)
    discriminant = shifted * shifted - gain * gain
    scale = shifted * shifted + gain * gain

    if discriminant > tol * scale:
        kind = RegimeKind.UNBROKEN
    elif discriminant < -tol * scale:
        kind = RegimeKind.BROKEN
    else:
        kind = RegimeKind.EXCEPTIONAL

    logger.debug(f"regime {kind.value}: discriminant = {discriminant:.6e} GeV⁴")
    return Regime(kind=kind, discriminant=discriminant)


def pt_commutator_check(p: OscillationParams, choice: PTChoice) -> float:
    """‖H·(PT) − (PT)·H‖_F with PT = M·K, i.e. ‖H·M − M·H*‖_F"""
    H = np.asarray(build_hamiltonian(p))
    M = PT_OPERATORS[choice]
    return frobenius_norm(H @ M - M @ np.conj(H))


__all__ = [
    'SIGMA_X', 'SIGMA_Y', 'SIGMA_Z',
    'HermitianSplit',
    'mixing_terms',
    'build_hamiltonian',
    'hermitian_split',
    'eigenvalues_general',
    'classify_regime',
    'pt_commutator_check',
]
