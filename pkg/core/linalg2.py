#!/usr/bin/env python3
"""
🧮 linalg2 - Complex 2×2 linear algebra
Date: 03/09/2025
Description: Arithmetic, eigendecomposition with defective-case detection and
a closed-form evolution operator e^{-iHt} that stays valid at exceptional points.

CVec2 / CMat2 are read-only numpy complex128 arrays of shape (2,) and (2, 2).
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from models.errors import (
    DegenerateNormError,
    InvalidParamsError,
    NonFiniteError,
    SingularMatrixError,
)
from models.oscillation import DEFAULT_TOL_DEFECT
from utils.logger import setup_logger

logger = setup_logger('linalg2')

Complex = complex
CVec2 = np.ndarray
CMat2 = np.ndarray
ArrayLike2 = Union[np.ndarray, Sequence]

SINGULAR_DET = 1e-300
NORMALIZED_TOL = 1e-14
SQRT_CLEAN_TOL = 1e-15
SINC_SERIES_CUTOFF = 1e-4
OVERFLOW_SPLIT = 30.0


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _check_finite(array: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{what} contains NaN or Inf")


def cvec2(c0: complex, c1: complex) -> CVec2:
    return as_cvec2((c0, c1))


def cmat2(a: complex, b: complex, c: complex, d: complex) -> CMat2:
    """Row-major 2×2 matrix [[a, b], [c, d]]"""
    return as_cmat2(((a, b), (c, d)))


def as_cvec2(value: ArrayLike2) -> CVec2:
    vec = np.array(value, dtype=np.complex128)
    if vec.shape != (2,):
        raise InvalidParamsError(f"expected a 2-vector, got shape {vec.shape}")
    _check_finite(vec, "vector")
    return _frozen(vec)


def as_cmat2(value: ArrayLike2) -> CMat2:
    mat = np.array(value, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise InvalidParamsError(f"expected a 2×2 matrix, got shape {mat.shape}")
    _check_finite(mat, "matrix")
    return _frozen(mat)


def identity2() -> CMat2:
    return as_cmat2(np.eye(2))


# Matrix operations

def adjoint(A: CMat2) -> CMat2:
    return as_cmat2(np.conj(A).T)


def trace(A: CMat2) -> Complex:
    return complex(A[0, 0] + A[1, 1])


def mul(A: CMat2, B: CMat2) -> CMat2:
    return as_cmat2(np.asarray(A) @ np.asarray(B))


def det(A: CMat2) -> Complex:
    return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])


def inverse(A: CMat2) -> CMat2:
    d = det(A)
    if abs(d) <= SINGULAR_DET:
        raise SingularMatrixError(f"|det| = {abs(d):.3e} is below {SINGULAR_DET:g}")
    return as_cmat2(np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]]) / d)


def frobenius_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A))


def commutator(A: CMat2, B: CMat2) -> CMat2:
    return as_cmat2(A @ B - B @ A)


def anticommutator(A: CMat2, B: CMat2) -> CMat2:
    return as_cmat2(A @ B + B @ A)


def is_hermitian(A: CMat2, tol: float = 1e-14) -> bool:
    """A = A† within tol relative to ‖A‖_F"""
    scale = max(frobenius_norm(A), 1.0e-300)
    return frobenius_norm(A - np.conj(A).T) <= tol * scale


# Vector operations

def inner(u: CVec2, v: CVec2) -> Complex:
    """⟨u|v⟩, antilinear in u"""
    return complex(np.vdot(u, v))


def outer(u: CVec2, v: CVec2) -> CMat2:
    """|u⟩⟨v|"""
    return as_cmat2(np.outer(u, np.conj(v)))


def normalize(v: CVec2) -> CVec2:
    norm = float(np.linalg.norm(v))
    if norm <= SINGULAR_DET:
        raise DegenerateNormError("cannot normalize a zero vector")
    if abs(norm - 1.0) <= NORMALIZED_TOL:
        return as_cvec2(v)
    return as_cvec2(np.asarray(v) / norm)


def principal_sqrt(z: complex) -> Complex:
    """Principal square root after clearing round-off imaginary parts.

    A radicand such as -4 + (-0j) would otherwise land on -2j; clearing the
    sign of a negligible imaginary part keeps the root in the upper half plane.
    """
    z = complex(z)
    if abs(z.imag) <= SQRT_CLEAN_TOL * abs(z):
        z = complex(z.real, 0.0)
    return complex(np.sqrt(z))


@dataclass(frozen=True)
class Eig2:
    """Eigen-decomposition of a 2×2 matrix"""
    lambda_plus: Complex
    lambda_minus: Complex
    v_plus: CVec2
    v_minus: CVec2
    defective: bool
    discriminant: Complex


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so that the largest component is real and positive"""
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _eigenvector(H: CMat2, lam: complex, fallback: int) -> CVec2:
    a, b, c, d = H[0, 0], H[0, 1], H[1, 0], H[1, 1]
    from_row0 = np.array([b, lam - a])
    from_row1 = np.array([lam - d, c])
    candidate = from_row0 if np.linalg.norm(from_row0) >= np.linalg.norm(from_row1) else from_row1

    if np.linalg.norm(candidate) <= NORMALIZED_TOL * frobenius_norm(H):
        # H is a multiple of the identity
        candidate = np.eye(2, dtype=np.complex128)[fallback]
    return normalize(_fix_phase(candidate / np.linalg.norm(candidate)))


def eig2(H: CMat2, tol_defect: float = DEFAULT_TOL_DEFECT) -> Eig2:
    """Eigenvalues λ± = trH/2 ± √Δ² and unit right eigenvectors.

    Δ² = −det(H − (trH/2)I). The matrix is flagged defective when
    |Δ²| ≤ tol_defect·‖H‖_F², both sides scaling as H².
    """
    H = as_cmat2(H)
    half = trace(H) / 2
    h0 = H[0, 0] - half
    discriminant = complex(h0 * h0 + H[0, 1] * H[1, 0])
    root = principal_sqrt(discriminant)

    lambda_plus = half + root
    lambda_minus = half - root
    defective = abs(discriminant) <= tol_defect * frobenius_norm(H) ** 2

    if defective:
        logger.debug(f"defective matrix: |Δ²| = {abs(discriminant):.3e}")

    return Eig2(
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
        v_plus=_eigenvector(H, lambda_plus, 1),
        v_minus=_eigenvector(H, lambda_minus, 0),
        defective=defective,
        discriminant=discriminant,
    )


def _sinc(x: complex) -> complex:
    if abs(x) < SINC_SERIES_CUTOFF:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return np.sin(x) / x


def evolution_operator(H: CMat2, t: float) -> CMat2:
    """U(t) = e^{-iHt} by the closed form

    U = e^{-i s t}[cos(Δt)·I − i·t·sinc(Δt)·(H − sI)],  s = trH/2,
    which needs no Jordan branch when Δ = 0.
    """
    H = as_cmat2(H)
    if not math.isfinite(t):
        raise NonFiniteError(f"t must be finite, got {t}")

    s = trace(H) / 2
    H0 = np.asarray(H) - s * np.eye(2)
    delta = principal_sqrt(H0[0, 0] ** 2 + H0[0, 1] * H0[1, 0])
    x = delta * t

    if abs(x.imag) < OVERFLOW_SPLIT:
        U = np.exp(-1j * s * t) * (np.cos(x) * np.eye(2) - 1j * t * _sinc(x) * H0)
    else:
        # Fold the global phase into each exponential
        grow = np.exp(-1j * s * t + 1j * x)
        decay = np.exp(-1j * s * t - 1j * x)
        U = 0.5 * ((grow + decay) * np.eye(2) - (grow - decay) / delta * H0)

    if not np.all(np.isfinite(U)):
        raise NonFiniteError(f"e^(-iHt) overflowed at t = {t:g}")
    return as_cmat2(U)


def expm_taylor(H: CMat2, t: float, terms: int = 30) -> CMat2:
    """Scaled-and-squared Taylor series of e^{-iHt}"""
    A = -1j * t * np.asarray(as_cmat2(H))
    norm = frobenius_norm(A)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    A = A / (2 ** squarings)

    result = np.eye(2, dtype=np.complex128)
    term = np.eye(2, dtype=np.complex128)
    for k in range(1, terms + 1):
        term = term @ A / k
        result = result + term

    for _ in range(squarings):
        result = result @ result
    return as_cmat2(result)


def expm_eig(H: CMat2, t: float) -> CMat2:
    """e^{-iHt} = V·diag(e^{-iλt})·V⁻¹ for non-defective H"""
    decomposition = eig2(H)
    if decomposition.defective:
        raise InvalidParamsError("eigendecomposition exponential needs a non-defective matrix")
    V = np.column_stack([decomposition.v_plus, decomposition.v_minus])
    phases = np.diag([np.exp(-1j * decomposition.lambda_plus * t),
                      np.exp(-1j * decomposition.lambda_minus * t)])
    return as_cmat2(V @ phases @ inverse(as_cmat2(V)))


__all__ = [
    'Complex', 'CVec2', 'CMat2', 'Eig2',
    'cvec2', 'cmat2', 'as_cvec2', 'as_cmat2', 'identity2',
    'adjoint', 'trace', 'mul', 'det', 'inverse', 'frobenius_norm',
    'commutator', 'anticommutator', 'is_hermitian',
    'inner', 'outer', 'normalize', 'principal_sqrt',
    'eig2', 'evolution_operator', 'expm_taylor', 'expm_eig',
]
