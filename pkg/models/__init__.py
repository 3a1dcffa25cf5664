"""
🌀 nhosc - Data Models
Date: 03/09/2025
Description: Parameter, regime, probability and configuration models
"""

from .errors import *
from .oscillation import *
from .run_config import *

__version__ = "1.0.0"
