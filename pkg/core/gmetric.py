#!/usr/bin/env python3
"""
📐 gmetric - Bi-orthonormal G-metric framework
Date: 03/09/2025
Description: Eigenvector frames, metric operators and G-metric probabilities for
the PT-symmetric Hamiltonian (θ = π/4, χ = 0), in natural and in L/E units.

Flavor states are the unit vectors |u_a⟩ = (1, 0) and |u_b⟩ = (0, 1). The
probabilities of this framework do not sum to one; nothing here enforces it.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from models.errors import DegenerateNormError, InvalidParamsError, WrongRegimeError
from models.oscillation import FlavorLabel, OscillationParams, ProbabilityQuad, RegimeKind
from utils.logger import setup_logger
from utils.units import UnitsMode, double_phase_factor, phase_factor
from .linalg2 import (
    CMat2,
    CVec2,
    Complex,
    as_cmat2,
    as_cvec2,
    evolution_operator,
    inverse,
    outer,
)
from .model import build_hamiltonian, classify_regime

logger = setup_logger('gmetric')

NORM_FLOOR = 1e-300
FLAVOR_STATES = {
    FlavorLabel.A: as_cvec2((1.0, 0.0)),
    FlavorLabel.B: as_cvec2((0.0, 1.0)),
}


@dataclass(frozen=True)
class UnbrokenFrame:
    """Right/left eigenvectors and metric in the PT-unbroken regime"""
    tau: float
    zeta: float
    omega: float
    u_plus: CVec2
    u_minus: CVec2
    v_plus: CVec2
    v_minus: CVec2
    G: CMat2
    A_inv: CMat2

    @property
    def energies(self) -> Tuple[Complex, Complex]:
        return complex(self.omega + self.zeta), complex(self.omega - self.zeta)


@dataclass(frozen=True)
class BrokenFrame:
    """Right/left eigenvectors in the PT-broken regime (E'± = ω ± iζ′)"""
    tau_p: float
    zeta_p: float
    omega: float
    u_plus: CVec2
    u_minus: CVec2
    v_plus: CVec2
    v_minus: CVec2
    A_inv: CMat2

    @property
    def energies(self) -> Tuple[Complex, Complex]:
        return complex(self.omega, self.zeta_p), complex(self.omega, -self.zeta_p)


Frame = Union[UnbrokenFrame, BrokenFrame]


def _omega(p: OscillationParams) -> float:
    # global phase rate, cancels in every probability
    return (p.kappa * math.cos(p.phi) + p.mbar2) / (4.0 * p.energy_E)


def unbroken_frame(p: OscillationParams) -> UnbrokenFrame:
    regime = classify_regime(p)
    if regime.kind is not RegimeKind.UNBROKEN:
        raise WrongRegimeError(f"unbroken frame requested in the {regime.kind.value} regime")

    shifted = p.dm2 + p.sigma
    tau = math.asin(p.kappa * math.sin(p.phi) / shifted)
    cos_tau = math.cos(tau)
    # keeps the sign of Δm² + σ
    zeta = shifted * cos_tau / (4.0 * p.energy_E)

    norm = 1.0 / math.sqrt(2.0 * cos_tau)
    half = np.exp(0.5j * tau)
    u_plus = as_cvec2(norm * np.array([half, np.conj(half)]))
    u_minus = as_cvec2(norm * np.array([np.conj(half), -half]))
    v_plus = as_cvec2(norm * np.array([np.conj(half), half]))
    v_minus = as_cvec2(norm * np.array([half, -np.conj(half)]))

    sec_tau, tan_tau = 1.0 / cos_tau, math.tan(tau)
    G = as_cmat2([[sec_tau, -1j * tan_tau], [1j * tan_tau, sec_tau]])

    return UnbrokenFrame(
        tau=tau,
        zeta=zeta,
        omega=_omega(p),
        u_plus=u_plus,
        u_minus=u_minus,
        v_plus=v_plus,
        v_minus=v_minus,
        G=G,
        A_inv=as_cmat2(np.column_stack([u_plus, u_minus])),
    )


def broken_frame(p: OscillationParams) -> BrokenFrame:
    regime = classify_regime(p)
    if regime.kind is not RegimeKind.BROKEN:
        raise WrongRegimeError(f"broken frame requested in the {regime.kind.value} regime")

    shifted = p.dm2 + p.sigma
    if shifted == 0.0:
        raise WrongRegimeError("cosh τ′ is undefined for Δm² + σ = 0")
    ratio = p.kappa * math.sin(p.phi) / shifted
    if ratio <= 1.0:
        raise WrongRegimeError(f"cosh τ′ = κsinφ/(Δm²+σ) = {ratio:.6g} is not above 1")

    tau_p = math.acosh(ratio)
    sinh_tau_p = math.sinh(tau_p)
    zeta_p = shifted * sinh_tau_p / (4.0 * p.energy_E)

    norm = 1.0 / math.sqrt(2.0 * sinh_tau_p)
    big, small = math.exp(0.5 * tau_p), math.exp(-0.5 * tau_p)
    u_plus = as_cvec2(norm * np.array([big, -1j * small]))
    u_minus = as_cvec2(norm * np.array([1j * small, big]))
    v_plus = as_cvec2(norm * np.array([big, 1j * small]))
    v_minus = as_cvec2(norm * np.array([-1j * small, big]))

    return BrokenFrame(
        tau_p=tau_p,
        zeta_p=zeta_p,
        omega=_omega(p),
        u_plus=u_plus,
        u_minus=u_minus,
        v_plus=v_plus,
        v_minus=v_minus,
        A_inv=as_cmat2(np.column_stack([u_plus, u_minus])),
    )


def frame_for(p: OscillationParams) -> Frame:
    """Unbroken or broken frame, whichever regime p is in"""
    kind = classify_regime(p).kind
    if kind is RegimeKind.UNBROKEN:
        return unbroken_frame(p)
    if kind is RegimeKind.BROKEN:
        return broken_frame(p)
    raise WrongRegimeError("G-metric closed forms are singular at the exceptional point")


def g_metric_time_dependent(f: BrokenFrame, t: float) -> CMat2:
    """G_t = (1/sinhτ′)[[cosh(τ′−2ζ′t), −i cosh2ζ′t], [i cosh2ζ′t, cosh(τ′+2ζ′t)]]"""
    x2 = 2.0 * f.zeta_p * t
    off = math.cosh(x2)
    return as_cmat2(np.array([
        [math.cosh(f.tau_p - x2), -1j * off],
        [1j * off, math.cosh(f.tau_p + x2)],
    ]) / math.sinh(f.tau_p))


def g_metric_static(frame: Frame) -> CMat2:
    """Time-independent metric Σ|v_i⟩⟨v_i|"""
    if isinstance(frame, UnbrokenFrame):
        return frame.G
    return g_metric_time_dependent(frame, 0.0)


def probability_g(psi: CVec2, phi_state: CVec2, G: CMat2) -> float:
    """|⟨φ|G|ψ⟩|² / (⟨φ|G|φ⟩⟨ψ|G|ψ⟩)"""
    G = np.asarray(G)
    norm_phi = float(np.vdot(phi_state, G @ phi_state).real)
    norm_psi = float(np.vdot(psi, G @ psi).real)
    if norm_phi <= NORM_FLOOR or norm_psi <= NORM_FLOOR:
        raise DegenerateNormError(
            f"G-norm vanished: ⟨φ|G|φ⟩ = {norm_phi:.3e}, ⟨ψ|G|ψ⟩ = {norm_psi:.3e}")
    overlap = np.vdot(phi_state, G @ psi)
    return float(abs(overlap) ** 2 / (norm_phi * norm_psi))


def frame_evolved_flavor_state(frame: Frame, flavor: FlavorLabel, t: float) -> CVec2:
    """Σ± c± e^{-iE±t}|u±⟩ with c = A·|flavor⟩ (mass-basis expansion)"""
    coefficients = np.asarray(inverse(frame.A_inv)) @ FLAVOR_STATES[flavor]
    e_plus, e_minus = frame.energies
    state = (coefficients[0] * np.exp(-1j * e_plus * t) * frame.u_plus
             + coefficients[1] * np.exp(-1j * e_minus * t) * frame.u_minus)
    return as_cvec2(state)


def _quad_from_states(state_a: CVec2, state_b: CVec2, G: CMat2) -> ProbabilityQuad:
    e_a, e_b = FLAVOR_STATES[FlavorLabel.A], FLAVOR_STATES[FlavorLabel.B]
    return ProbabilityQuad(
        p_aa=probability_g(state_a, e_a, G),
        p_ab=probability_g(state_a, e_b, G),
        p_ba=probability_g(state_b, e_a, G),
        p_bb=probability_g(state_b, e_b, G),
    )


def probabilities_unbroken(p: OscillationParams, t: float) -> ProbabilityQuad:
    frame = unbroken_frame(p)
    phase = frame.zeta * t
    return ProbabilityQuad(
        p_aa=math.cos(phase) ** 2,
        p_ab=math.sin(frame.tau - phase) ** 2,
        p_ba=math.sin(frame.tau + phase) ** 2,
        p_bb=math.cos(phase) ** 2,
    )


def _logcosh(x: float) -> float:
    return float(np.logaddexp(x, -x)) - math.log(2.0)


def _broken_quad(tau_p: float, x: float) -> ProbabilityQuad:
    """cosh-ratio probabilities at ζ′t = x, in log space"""
    lc_tau = _logcosh(tau_p)
    lc_minus2 = _logcosh(tau_p - 2.0 * x)
    lc_plus2 = _logcosh(tau_p + 2.0 * x)
    lc_x = _logcosh(x)
    return ProbabilityQuad(
        p_aa=math.exp(2.0 * _logcosh(tau_p - x) - lc_tau - lc_minus2),
        p_ab=math.exp(2.0 * lc_x - lc_tau - lc_plus2),
        p_ba=math.exp(2.0 * lc_x - lc_tau - lc_minus2),
        p_bb=math.exp(2.0 * _logcosh(tau_p + x) - lc_tau - lc_plus2),
    )


def probabilities_broken(p: OscillationParams, t: float,
                         static_metric: bool = False) -> ProbabilityQuad:
    frame = broken_frame(p)
    if not static_metric:
        return _broken_quad(frame.tau_p, frame.zeta_p * t)

    logger.debug("broken regime with the time-independent metric")
    return _quad_from_states(
        frame_evolved_flavor_state(frame, FlavorLabel.A, t),
        frame_evolved_flavor_state(frame, FlavorLabel.B, t),
        g_metric_static(frame),
    )


def probabilities_g_pipeline(p: OscillationParams, t: float,
                             static_metric: bool = False) -> ProbabilityQuad:
    """Evolve the flavor states with e^{-iHt} and apply probability_g.

    G0 = [Σ|u_i⟩⟨u_i|]⁻¹ from the frame. In the broken regime the metric is
    carried along as G_t = (U⁻¹)†·G0·U⁻¹ unless static_metric is set. Since
    ⟨φ|G_t|Uψ⟩ = ⟨U⁻¹φ|G0|ψ⟩, that case evolves the target states backwards
    with e^{+iHt} and U⁻¹ is never formed.
    """
    frame = frame_for(p)
    H = build_hamiltonian(p)
    G0 = as_cmat2(inverse(outer(frame.u_plus, frame.u_plus) + outer(frame.u_minus, frame.u_minus)))
    e_a, e_b = FLAVOR_STATES[FlavorLabel.A], FLAVOR_STATES[FlavorLabel.B]

    if isinstance(frame, BrokenFrame) and not static_metric:
        W = np.asarray(evolution_operator(H, -t))
        back_a, back_b = as_cvec2(W @ e_a), as_cvec2(W @ e_b)
        return ProbabilityQuad(
            p_aa=probability_g(e_a, back_a, G0),
            p_ab=probability_g(e_a, back_b, G0),
            p_ba=probability_g(e_b, back_a, G0),
            p_bb=probability_g(e_b, back_b, G0),
        )

    U = np.asarray(evolution_operator(H, t))
    return _quad_from_states(as_cvec2(U @ e_a), as_cvec2(U @ e_b), G0)


def _check_energy(E_GeV: float) -> None:
    if not E_GeV > 0:
        raise InvalidParamsError(f"E must be positive, got {E_GeV}")


def probabilities_unbroken_LE(dm2_eV2: float, sigma_eV2: float, tau: float,
                              L_km: float, E_GeV: float,
                              mode: UnitsMode = UnitsMode.PAPER_ROUNDED) -> ProbabilityQuad:
    """Unbroken probabilities with the phase f·cosτ·(Δm²+σ)[eV²]·L/E"""
    _check_energy(E_GeV)
    phase = phase_factor(mode) * math.cos(tau) * (dm2_eV2 + sigma_eV2) * L_km / E_GeV
    return ProbabilityQuad(
        p_aa=math.cos(phase) ** 2,
        p_ab=math.sin(tau - phase) ** 2,
        p_ba=math.sin(tau + phase) ** 2,
        p_bb=math.cos(phase) ** 2,
    )


def probabilities_broken_LE(dm2_eV2: float, sigma_eV2: float, tau_p: float,
                            L_km: float, E_GeV: float,
                            mode: UnitsMode = UnitsMode.PAPER_ROUNDED) -> ProbabilityQuad:
    """Broken probabilities with ζ′t = f·sinhτ′·(Δm²+σ)[eV²]·L/E (2f in doubled phases)"""
    _check_energy(E_GeV)
    rate = math.sinh(tau_p) * (dm2_eV2 + sigma_eV2) * L_km / E_GeV
    x = phase_factor(mode) * rate
    x2 = double_phase_factor(mode) * rate

    lc_tau = _logcosh(tau_p)
    lc_x = _logcosh(x)
    return ProbabilityQuad(
        p_aa=math.exp(2.0 * _logcosh(tau_p - x) - lc_tau - _logcosh(tau_p - x2)),
        p_ab=math.exp(2.0 * lc_x - lc_tau - _logcosh(tau_p + x2)),
        p_ba=math.exp(2.0 * lc_x - lc_tau - _logcosh(tau_p - x2)),
        p_bb=math.exp(2.0 * _logcosh(tau_p + x) - lc_tau - _logcosh(tau_p + x2)),
    )


def _sin_phi(phi: float) -> float:
    value = math.sin(phi)
    if value == 0.0:
        raise InvalidParamsError("sinφ = 0: κ cannot be solved from τ")
    return value


def kappa_from_tau(dm2: float, sigma: float, tau: float, phi: float = math.pi / 2) -> float:
    """κ with sinτ = κsinφ/(Δm²+σ); units follow dm2 and sigma"""
    return (dm2 + sigma) * math.sin(tau) / _sin_phi(phi)


def kappa_from_tau_p(dm2: float, sigma: float, tau_p: float, phi: float = math.pi / 2) -> float:
    """κ with coshτ′ = κsinφ/(Δm²+σ); units follow dm2 and sigma"""
    return (dm2 + sigma) * math.cosh(tau_p) / _sin_phi(phi)


__all__ = [
    'UnbrokenFrame',
    'BrokenFrame',
    'FLAVOR_STATES',
    'unbroken_frame',
    'broken_frame',
    'frame_for',
    'g_metric_time_dependent',
    'g_metric_static',
    'probability_g',
    'frame_evolved_flavor_state',
    'probabilities_unbroken',
    'probabilities_broken',
    'probabilities_g_pipeline',
    'probabilities_unbroken_LE',
    'probabilities_broken_LE',
    'kappa_from_tau',
    'kappa_from_tau_p',
]
