#!/usr/bin/env python3
"""
🌀 nhosc - Main Application Entry Point
Date: 03/09/2025
Description: Runs the nhosc command line from a source checkout
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from cli.nhosc_cli import main


if __name__ == "__main__":
    sys.exit(main())
