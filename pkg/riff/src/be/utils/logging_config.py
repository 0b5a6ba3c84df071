"""
Colored logging configuration for the RIFF back end.

Color Scheme:
    - DEBUG: Blue
    - INFO: Cyan
    - WARNING: Yellow
    - ERROR: Red
    - CRITICAL: Bright Red

Usage:
    from riff.src.be.utils.logging_config import setup_logging

    setup_logging(level=logging.INFO)
"""

import logging
import sys
from typing import Optional, TextIO

from colorama import Fore, Style, init

init(autoreset=True)

BACKEND_LOGGER_NAME = "riff.src.be"


class ColoredFormatter(logging.Formatter):
    """Formatter that colors the level name and message by severity."""

    COLORS = {
        'DEBUG': Fore.BLUE,
        'INFO': Fore.CYAN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.RED + Style.BRIGHT,
    }

    COMPONENT_COLORS = {
        'timestamp': Fore.BLUE,
        'module': Fore.MAGENTA,
        'reset': Style.RESET_ALL,
    }

    def format(self, record):
        """Format log record with colors."""
        level_color = self.COLORS.get(record.levelname, '')
        reset = self.COMPONENT_COLORS['reset']

        timestamp = self.formatTime(record, '%H:%M:%S')
        colored_timestamp = f"{self.COMPONENT_COLORS['timestamp']}[{timestamp}]{reset}"
        colored_level = f"{level_color}{record.levelname:8}{reset}"
        short_module = record.name.rsplit('.', 1)[-1]
        colored_module = f"{self.COMPONENT_COLORS['module']}{short_module}{reset}"
        colored_message = f"{level_color}{record.getMessage()}{reset}"

        log_line = f"{colored_timestamp} {colored_level} {colored_module}: {colored_message}"

        if record.exc_info:
            log_line += "\n" + self.formatException(record.exc_info)

        return log_line


def setup_logging(level=logging.INFO, stream: Optional[TextIO] = None):
    """
    Set up the back-end logger with colored output.

    The handler is attached to the ``riff.src.be`` logger only, so library
    users keep control of the root logger.

    Args:
        level: Logging level (default: logging.INFO)
        stream: Target stream; stdout for INFO and below, stderr otherwise
    """
    if stream is None:
        stream = sys.stdout if level <= logging.INFO else sys.stderr

    console_handler = logging.StreamHandler(stream)
    console_handler.setLevel(level)
    console_handler.setFormatter(ColoredFormatter())

    backend_logger = logging.getLogger(BACKEND_LOGGER_NAME)
    backend_logger.setLevel(level)
    backend_logger.handlers.clear()
    backend_logger.addHandler(console_handler)
    backend_logger.propagate = False

    return backend_logger
