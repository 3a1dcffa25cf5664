#!/usr/bin/env python3
"""
🌊 brodygraefe - Trace-preserving density-matrix evolution
Date: 03/09/2025
Description: Density matrices evolved under H = B − iC with the nonlinear
master equation dρ/dt = −i[B,ρ] − {C,ρ} + 2Tr(ρC)ρ, its normalized analytic
solution, trace probabilities P_ab = Tr(ρ_b(0)ρ_a(t)) and the closed-form
probability expressions in (α, β, γ, ξ).
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from models.errors import (
    DegenerateSechError,
    ExceptionalPointError,
    InvalidDensityMatrixError,
    InvalidParamsError,
    NotPTSymmetricError,
    UnsupportedChiError,
    VanishingNormError,
)
from models.oscillation import (
    DEFAULT_DENSITY_TOL,
    PT_THETA_TOL,
    QUARTER_PI,
    FlavorLabel,
    InitialStates,
    OscillationParams,
    ProbabilityQuad,
)
from utils.logger import setup_logger
from utils.units import UnitsMode, double_phase_factor
from .linalg2 import (
    CMat2,
    CVec2,
    Complex,
    as_cmat2,
    as_cvec2,
    eig2,
    evolution_operator,
    outer,
    principal_sqrt,
)
from .model import HermitianSplit, build_hamiltonian, mixing_terms

logger = setup_logger('brodygraefe')

TRACE_FLOOR = 1e-300
EXCEPTIONAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite 2×2 state"""
    m: CMat2
    tol: float = field(default=DEFAULT_DENSITY_TOL, repr=False)

    def __post_init__(self):
        m = as_cmat2(self.m)
        object.__setattr__(self, 'm', m)

        if np.max(np.abs(m - np.conj(m).T)) > self.tol:
            raise InvalidDensityMatrixError("density matrix is not Hermitian")
        if abs(m[0, 0] + m[1, 1] - 1.0) > self.tol:
            raise InvalidDensityMatrixError(f"trace {complex(m[0, 0] + m[1, 1]):.12g} is not 1")
        if np.min(self.eigenvalues) < -self.tol:
            raise InvalidDensityMatrixError(f"negative eigenvalue {np.min(self.eigenvalues):.3e}")

    @classmethod
    def from_unnormalized(cls, numerator: np.ndarray) -> 'DensityMatrix':
        """Hermitize and divide by the trace"""
        numerator = np.asarray(numerator)
        norm = float(np.real(numerator[0, 0] + numerator[1, 1]))
        if not math.isfinite(norm) or norm <= TRACE_FLOOR:
            raise VanishingNormError(f"numerator trace {norm:.3e} underflowed")
        hermitian = 0.5 * (numerator + np.conj(numerator).T)
        return cls(hermitian / norm)

    @classmethod
    def pure(cls, state: CVec2) -> 'DensityMatrix':
        return cls(outer(state, state))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.m + np.conj(self.m).T))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.m @ self.m)))


def flavor_state(theta: float, flavor: FlavorLabel,
                 initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS) -> CVec2:
    """|ν_a⟩ = (−cosθ, sinθ), |ν_b⟩ = (sinθ, cosθ), or the unit vectors"""
    if initial_states is InitialStates.FLAVOR_BASIS:
        return as_cvec2((1.0, 0.0) if flavor is FlavorLabel.A else (0.0, 1.0))
    c, s = math.cos(theta), math.sin(theta)
    return as_cvec2((-c, s) if flavor is FlavorLabel.A else (s, c))


def initial_density(theta: float, flavor: FlavorLabel,
                    initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS) -> DensityMatrix:
    return DensityMatrix.pure(flavor_state(theta, flavor, initial_states))


def density_rhs_array(B: np.ndarray, C: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """−i[B,ρ] − {C,ρ} + 2Tr(ρC)ρ on raw arrays"""
    return (-1j * (B @ rho - rho @ B)
            - (C @ rho + rho @ C)
            + 2.0 * np.trace(rho @ C) * rho)


def rhs_density(split: HermitianSplit, rho: DensityMatrix) -> CMat2:
    return as_cmat2(density_rhs_array(np.asarray(split.B), np.asarray(split.C), np.asarray(rho.m)))


def _growth_rate(H: CMat2, t: float) -> float:
    decomposition = eig2(H)
    rates = (decomposition.lambda_plus.imag, decomposition.lambda_minus.imag)
    return max(rates) if t >= 0 else min(rates)


def evolve_density(H: CMat2, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """e^{-iHt}ρ0e^{iH†t} / Tr(·), with e^{μt} factored out beforehand.

    μ is the largest imaginary eigenvalue part (smallest for t < 0), so the
    shifted propagator e^{-i(H − iμ)t} never grows.
    """
    H = as_cmat2(H)
    mu = _growth_rate(H, t)
    U = np.asarray(evolution_operator(as_cmat2(H - 1j * mu * np.eye(2)), t))
    return DensityMatrix.from_unnormalized(U @ np.asarray(rho0.m) @ np.conj(U).T)


def evolve_density_analytic(p: OscillationParams, rho0: DensityMatrix, t: float) -> DensityMatrix:
    return evolve_density(build_hamiltonian(p), rho0, t)


def probability_trace(rho_target0: DensityMatrix, rho_evolved: DensityMatrix) -> float:
    """Tr(ρ_target(0)·ρ_evolved)"""
    return float(np.real(np.trace(np.asarray(rho_target0.m) @ np.asarray(rho_evolved.m))))


def probabilities_from_hamiltonian(H: CMat2, theta: float, t: float,
                                   initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS
                                   ) -> ProbabilityQuad:
    rho_a0 = initial_density(theta, FlavorLabel.A, initial_states)
    rho_b0 = initial_density(theta, FlavorLabel.B, initial_states)
    rho_a = evolve_density(H, rho_a0, t)
    rho_b = evolve_density(H, rho_b0, t)
    return ProbabilityQuad(
        p_aa=probability_trace(rho_a0, rho_a),
        p_ab=probability_trace(rho_b0, rho_a),
        p_ba=probability_trace(rho_a0, rho_b),
        p_bb=probability_trace(rho_b0, rho_b),
    )


def probabilities_density_trace(p: OscillationParams, t: float,
                                initial_states: InitialStates = InitialStates.HERMITIAN_EIGENBASIS
                                ) -> ProbabilityQuad:
    """Trace pipeline; the only evaluation path for χ ≠ 0"""
    return probabilities_from_hamiltonian(build_hamiltonian(p), p.theta, t, initial_states)


def _pinned_z(off: float, diag: complex) -> Tuple[Complex, Complex]:
    """z with tanh z = D/R and sech z = S/R; returns (z, R)"""
    r_squared = off * off + diag * diag
    if abs(r_squared) <= EXCEPTIONAL_TOL * (off * off + abs(diag) ** 2):
        raise ExceptionalPointError("R = 0: tanh z and sech z are undefined at the exceptional point")

    R = principal_sqrt(r_squared)
    z = complex(np.arctanh(diag / R))
    sech_scaled = R / np.cosh(z)
    if abs(sech_scaled + off) < abs(sech_scaled - off):
        # principal arctanh picked the branch with sech z = −S/R
        z = z - 1j * math.pi if z.imag > 0 else z + 1j * math.pi
    return z, R


@dataclass(frozen=True)
class ClosedFormParams:
    """z = α + iβ and Γ = γ + iξ of the closed-form density probabilities.

    rate is σ + Δm² sin2θ in GeV²; Γ = rate·cosh z / 4E.
    """
    z: Complex
    Gamma: Complex
    theta: float
    energy_E: float
    rate: float
    omega: Complex = 0j

    @property
    def alpha(self) -> float:
        return self.z.real

    @property
    def beta(self) -> float:
        return self.z.imag

    @property
    def gamma_r(self) -> float:
        return self.Gamma.real

    @property
    def xi(self) -> float:
        return self.Gamma.imag

    @property
    def tanh_z(self) -> Complex:
        return complex(np.tanh(self.z))

    @property
    def sech_z(self) -> Complex:
        return complex(1.0 / np.cosh(self.z))

    @classmethod
    def from_angles(cls, alpha: float, beta: float, theta: float, dm2: float,
                    sigma: float, energy_E: float, mbar2: float = 0.0) -> 'ClosedFormParams':
        """Parameters given directly as (α, β), GeV units"""
        if energy_E <= 0:
            raise InvalidParamsError(f"energy_E must be positive, got {energy_E}")
        _, sin2t = mixing_terms(theta)
        rate = sigma + dm2 * sin2t
        if rate == 0.0:
            raise DegenerateSechError("σ + Δm² sin2θ = 0")
        z = complex(alpha, beta)
        return cls(
            z=z,
            Gamma=complex(rate * np.cosh(z) / (4.0 * energy_E)),
            theta=theta,
            energy_E=energy_E,
            rate=rate,
            omega=complex(mbar2 / (4.0 * energy_E)),
        )

    @classmethod
    def from_hamiltonian(cls, H: CMat2, energy_E: float, theta: float) -> 'ClosedFormParams':
        """Inverse of effective_hamiltonian() for symmetric off-diagonal H"""
        H = np.asarray(as_cmat2(H))
        half = (H[0, 0] + H[1, 1]) / 2
        K = 4.0 * energy_E * (H - half * np.eye(2))
        scale = float(np.linalg.norm(K))
        if abs(K[0, 1] - K[1, 0]) > 1e-12 * scale:
            raise InvalidParamsError("off-diagonal entries of H differ; z needs χ = 0")
        if abs(K[0, 1].imag) > 1e-12 * scale:
            raise InvalidParamsError("off-diagonal entry of H is not real")

        rate = float(K[0, 1].real)
        if rate == 0.0:
            raise DegenerateSechError("off-diagonal entry of H vanishes")
        z, R = _pinned_z(rate, complex(-K[0, 0]))
        return cls(z=z, Gamma=R / (4.0 * energy_E), theta=theta, energy_E=energy_E,
                   rate=rate, omega=complex(half))

    def _generator(self) -> np.ndarray:
        t, s = self.tanh_z, self.sech_z
        return np.array([[-t, s], [s, t]])

    def effective_hamiltonian(self) -> CMat2:
        """ωI + Γ[[−tanh z, sech z], [sech z, tanh z]]"""
        return as_cmat2(self.omega * np.eye(2) + self.Gamma * self._generator())

    def numerator_propagator(self, t: float) -> CMat2:
        """e^{-iωt}[cos Γt·I − i sin Γt·[[−tanh z, sech z], [sech z, tanh z]]]"""
        phase = np.exp(-1j * self.omega * t)
        Gt = self.Gamma * t
        return as_cmat2(phase * (np.cos(Gt) * np.eye(2) - 1j * np.sin(Gt) * self._generator()))

    def required_kappa_sin_phi(self) -> float:
        """κ sinφ a Hamiltonian of the standard form would need"""
        return -self.rate * math.cosh(self.alpha) * math.sin(self.beta)

    def required_detuning(self) -> float:
        """Re D = Δm² cos2θ a Hamiltonian of the standard form would need"""
        return self.rate * math.sinh(self.alpha) * math.cos(self.beta)


def closed_form_params(p: OscillationParams) -> ClosedFormParams:
    if p.chi != 0.0:
        raise UnsupportedChiError("closed forms need χ = 0; use the trace pipeline")
    cos2t, sin2t = mixing_terms(p.theta)
    rate = p.sigma + p.dm2 * sin2t
    if rate == 0.0:
        raise DegenerateSechError("σ + Δm² sin2θ = 0: z is undefined, use the trace pipeline")

    diag = complex(p.dm2 * cos2t, -p.kappa * math.sin(p.phi))
    z, R = _pinned_z(rate, diag)
    logger.debug(f"z = {z:.6g}, R = {R:.6g} GeV²")
    return ClosedFormParams(
        z=z,
        Gamma=R / (4.0 * p.energy_E),
        theta=p.theta,
        energy_E=p.energy_E,
        rate=rate,
        omega=complex((p.kappa * math.cos(p.phi) + p.mbar2) / (4.0 * p.energy_E)),
    )


@dataclass(frozen=True)
class _ScaledPhases:
    """cos/sin of 2γt and cosh/sinh of 2ξt, all multiplied by e^{-|2ξt|}"""
    chx: float
    shx: float
    cgs: float
    sgs: float

    @classmethod
    def at(cls, g2: float, x2: float) -> '_ScaledPhases':
        scale = math.exp(-abs(x2))
        tail = math.exp(-2.0 * abs(x2))
        return cls(
            chx=0.5 * (1.0 + tail),
            shx=math.copysign(-0.5 * math.expm1(-2.0 * abs(x2)), x2),
            cgs=math.cos(g2) * scale,
            sgs=math.sin(g2) * scale,
        )

    @classmethod
    def plateau(cls, direction: float) -> '_ScaledPhases':
        return cls(chx=0.5, shx=math.copysign(0.5, direction), cgs=0.0, sgs=0.0)


def _density_kernel(alpha: float, beta: float, theta: float, ph: _ScaledPhases,
                    den_sgs: Optional[float] = None) -> ProbabilityQuad:
    """General-θ closed form. den_sgs replaces sin2γt in the P_aa / P_bb
    denominators' sin2θ bracket (printed unit-converted variant)."""
    cos2t, sin2t = mixing_terms(theta)
    cos4t = cos2t * cos2t - sin2t * sin2t
    sin4t = 2.0 * sin2t * cos2t

    ca, sa = math.cosh(alpha), math.sinh(alpha)
    c2a, s2a = math.cosh(2 * alpha), math.sinh(2 * alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    c2b, s2b = math.cos(2 * beta), math.sin(2 * beta)

    common = cos4t * (2 + c2b - c2a) - 4 * cb * sin4t * sa
    T = (ph.cgs - ph.chx) * common - ph.cgs * (2 - 3 * c2b - c2a) + ph.chx * (2 + c2b + 3 * c2a)
    X = ph.sgs * s2b + ph.shx * s2a
    Y = ph.sgs * sb * sa - ph.shx * cb * ca
    numerator_ab = (ph.chx - ph.cgs) * (2 - c2b + c2a + common)

    base = 2 * ph.chx * ca * ca - 2 * ph.cgs * sb * sb
    den_a = 4 * (base - cos2t * X + 2 * sin2t * Y)
    den_b = 4 * (base + cos2t * X - 2 * sin2t * Y)
    den_aa, den_bb = den_a, den_b
    if den_sgs is not None:
        Y_printed = den_sgs * sb * sa - ph.shx * cb * ca
        den_aa = 4 * (base - cos2t * X + 2 * sin2t * Y_printed)
        den_bb = 4 * (base + cos2t * X - 2 * sin2t * Y_printed)

    for den in (den_a, den_b, den_aa, den_bb):
        if not den > 0:
            raise VanishingNormError(f"closed-form denominator {den:.3e} is not positive")

    return ProbabilityQuad(
        p_aa=(T - 4 * cos2t * X + 8 * sin2t * Y) / den_aa,
        p_ab=numerator_ab / den_a,
        p_ba=numerator_ab / den_b,
        p_bb=(T + 4 * cos2t * X - 8 * sin2t * Y) / den_bb,
    )


def _pt_kernel(alpha: float, beta: float, ph: _ScaledPhases) -> ProbabilityQuad:
    ca, sa = math.cosh(alpha), math.sinh(alpha)
    c2a = math.cosh(2 * alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    c2b = math.cos(2 * beta)

    Y = ph.sgs * sb * sa - ph.shx * cb * ca
    base = ph.chx * ca * ca - ph.cgs * sb * sb
    den_a = 4 * (base + Y)
    den_b = 4 * (base - Y)
    if not (den_a > 0 and den_b > 0):
        raise VanishingNormError(f"PT-limit denominators ({den_a:.3e}, {den_b:.3e}) are not positive")

    diagonal = ph.cgs * (-2 + c2b + c2a) + ph.chx * (2 + c2b + c2a)
    transition = (ph.chx - ph.cgs) * (c2a - c2b)
    return ProbabilityQuad(
        p_aa=(diagonal + 4 * Y) / den_a,
        p_ab=transition / den_a,
        p_ba=transition / den_b,
        p_bb=(diagonal - 4 * Y) / den_b,
    )


def closed_form_probabilities(cf: ClosedFormParams, t: float) -> ProbabilityQuad:
    phases = _ScaledPhases.at(2.0 * cf.gamma_r * t, 2.0 * cf.xi * t)
    return _density_kernel(cf.alpha, cf.beta, cf.theta, phases)


def _require_quarter_pi(theta: float) -> None:
    if abs(theta - QUARTER_PI) > PT_THETA_TOL:
        raise NotPTSymmetricError(f"PT limit needs θ = π/4, got {theta}")


def pt_limit_probabilities(cf: ClosedFormParams, t: float) -> ProbabilityQuad:
    _require_quarter_pi(cf.theta)
    return _pt_kernel(cf.alpha, cf.beta, _ScaledPhases.at(2.0 * cf.gamma_r * t, 2.0 * cf.xi * t))


def probabilities_closed_form(p: OscillationParams, t: float) -> ProbabilityQuad:
    return closed_form_probabilities(closed_form_params(p), t)


def probabilities_pt_limit(p: OscillationParams, t: float) -> ProbabilityQuad:
    if not p.is_pt_symmetric():
        raise NotPTSymmetricError("PT limit needs θ = π/4 and χ = 0")
    return pt_limit_probabilities(closed_form_params(p), t)


def probabilities_closed_form_LE(dm2_eV2: float, sigma_eV2: float, theta: float,
                                 alpha: float, beta: float, L_km: float, E_GeV: float,
                                 mode: UnitsMode = UnitsMode.PAPER_ROUNDED,
                                 appendix_verbatim: bool = False) -> ProbabilityQuad:
    """Closed form with 2γt = f₂·coshα·cosβ·rate·L/E and 2ξt = f₂·sinhα·sinβ·rate·L/E.

    rate = σ + Δm² sin2θ. appendix_verbatim (paper mode only) uses
    rate = σ + Δm² sin²2θ and sin2ξt in the P_aa / P_bb denominators, as printed.
    """
    if not E_GeV > 0:
        raise InvalidParamsError(f"E must be positive, got {E_GeV}")
    if appendix_verbatim and mode is not UnitsMode.PAPER_ROUNDED:
        raise InvalidParamsError("the printed unit-converted formula exists in paper-rounded mode only")

    _, sin2t = mixing_terms(theta)
    rate = sigma_eV2 + dm2_eV2 * (sin2t * sin2t if appendix_verbatim else sin2t)
    if rate == 0.0:
        raise DegenerateSechError("σ + Δm² sin2θ = 0")

    scaled = double_phase_factor(mode) * rate * L_km / E_GeV
    g2 = scaled * math.cosh(alpha) * math.cos(beta)
    x2 = scaled * math.sinh(alpha) * math.sin(beta)
    phases = _ScaledPhases.at(g2, x2)

    if not appendix_verbatim:
        return _density_kernel(alpha, beta, theta, phases)

    logger.warning("using the printed unit-converted density formula: "
                   "rate σ + Δm² sin²2θ and sin(2ξt) in the P_aa / P_bb denominators; "
                   "P_aa + P_ab = 1 does not hold")
    return _density_kernel(alpha, beta, theta, phases,
                           den_sgs=math.sin(x2) * math.exp(-abs(x2)))


def plateau_values(cf: ClosedFormParams) -> ProbabilityQuad:
    """t → ∞ limits of the four closed-form probabilities (ξ ≠ 0)"""
    if cf.xi == 0.0:
        raise InvalidParamsError("ξ = 0: the probabilities oscillate and have no plateau")
    return _density_kernel(cf.alpha, cf.beta, cf.theta, _ScaledPhases.plateau(cf.xi))


__all__ = [
    'DensityMatrix',
    'ClosedFormParams',
    'flavor_state',
    'initial_density',
    'density_rhs_array',
    'rhs_density',
    'evolve_density',
    'evolve_density_analytic',
    'probability_trace',
    'probabilities_from_hamiltonian',
    'probabilities_density_trace',
    'closed_form_params',
    'closed_form_probabilities',
    'pt_limit_probabilities',
    'probabilities_closed_form',
    'probabilities_pt_limit',
    'probabilities_closed_form_LE',
    'plateau_values',
]
