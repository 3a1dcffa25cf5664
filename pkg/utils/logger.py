#!/usr/bin/env python3
"""
📝 Logger Utility
Date: 03/09/2025
Description: Logging configuration for the nhosc components.
All component loggers hang off the ``nhosc`` parent, which owns the handlers.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

ROOT_LOGGER_NAME = "nhosc"
LOG_LEVEL_ENV = "NHOSC_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _root_logger() -> logging.Logger:
    root = logging.getLogger(ROOT_LOGGER_NAME)

    # Avoid duplicate handlers
    if root.handlers:
        return root

    root.setLevel(getattr(logging, os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).upper(), logging.WARNING))
    root.propagate = False

    # stdout may carry CSV/JSON output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(console_handler)
    return root


def setup_logger(name: str, level: Optional[str] = None,
                 log_file: Optional[Path] = None) -> logging.Logger:
    """Setup a component logger under the nhosc namespace"""
    _root_logger()

    qualified = name if name.startswith(ROOT_LOGGER_NAME) else f"{ROOT_LOGGER_NAME}.{name}"
    logger = logging.getLogger(qualified)

    if level:
        logger.setLevel(getattr(logging, level.upper()))

    if log_file:
        add_log_file(log_file)

    return logger


def add_log_file(log_file: Path) -> None:
    """Attach a file handler to the nhosc parent logger (once per path)"""
    root = _root_logger()
    target = str(Path(log_file).resolve())
    for handler in root.handlers:
        if isinstance(handler, logging.FileHandler) and handler.baseFilename == target:
            return

    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(file_handler)


def set_log_level(level: str) -> None:
    """Change the level of every nhosc logger at once"""
    _root_logger().setLevel(getattr(logging, level.upper()))
