"""
🤖 Automation Package
Date: 03/09/2025
Description: RK4 oracle, cross-validation, invariant checks, configuration loading and scans
"""

from .oracle import IntegrationConfig, integrate_density_rk4, integrate_density_path
from .cross_validation import ValidationReport, cross_validate, default_validation_grid, run_validation
from .invariants import check_invariants
from .config_loader import ConfigLoader, run_config_from_mapping
from .scans import phase_map, probability_sweep, regime_boundary

__all__ = [
    'IntegrationConfig',
    'integrate_density_rk4',
    'integrate_density_path',
    'ValidationReport',
    'cross_validate',
    'default_validation_grid',
    'run_validation',
    'check_invariants',
    'ConfigLoader',
    'run_config_from_mapping',
    'phase_map',
    'probability_sweep',
    'regime_boundary',
]
