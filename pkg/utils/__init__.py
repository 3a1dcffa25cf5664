"""
🔧 Utils Package
Date: 03/09/2025
Description: Logging setup and unit conversions
"""

from .logger import setup_logger, set_log_level, add_log_file
from .units import (
    UnitsMode,
    ev2_to_gev2,
    gev2_to_ev2,
    km_to_inverse_gev,
    phase_factor,
    double_phase_factor,
    parse_angle,
)

__all__ = [
    'setup_logger',
    'set_log_level',
    'add_log_file',
    'UnitsMode',
    'ev2_to_gev2',
    'gev2_to_ev2',
    'km_to_inverse_gev',
    'phase_factor',
    'double_phase_factor',
    'parse_angle',
]
