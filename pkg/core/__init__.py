"""
⚛️ nhosc - Core Engine
Date: 03/09/2025
Description: 2×2 linear algebra, the non-Hermitian Hamiltonian, the G-metric
framework and trace-preserving density-matrix evolution
"""

from .linalg2 import Eig2, eig2, evolution_operator
from .model import build_hamiltonian, classify_regime, hermitian_split
from .gmetric import probabilities_broken, probabilities_g_pipeline, probabilities_unbroken
from .brodygraefe import (
    ClosedFormParams,
    DensityMatrix,
    probabilities_closed_form,
    probabilities_density_trace,
    probabilities_pt_limit,
)

__version__ = "1.0.0"
