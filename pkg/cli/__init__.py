"""
🖥️ CLI Package
Date: 03/09/2025
Description: Command line interface
"""

from .nhosc_cli import main

__all__ = ['main']
