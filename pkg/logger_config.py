"""
Logging configuration for the inquisitive logic workbench.
"""
import logging
import sys
from typing import Optional


LOGGER_NAME = "InqWorkbench"


def setup_logger(log_file: Optional[str], log_level: str = "INFO") -> logging.Logger:
    """
    Configure and return the workbench logger.

    Diagnostics go to stderr; stdout is reserved for JSON-lines output.

    Args:
        log_file: Path to the log file, or None for console only
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        Configured logger instance
    """
    level = getattr(logging, log_level.upper())

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)

    # Prevent duplicate handlers
    if logger.handlers:
        logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger
