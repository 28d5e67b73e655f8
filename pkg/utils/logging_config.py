"""Centralized logging configuration for the FPU wave toolkit.

The root logger gets a colored console handler (stderr, so command output on
stdout stays clean) and a rotating file handler. Solvers log iterations at
DEBUG, stage boundaries at INFO and non-fatal numerical warnings at WARNING.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Example:
    >>> from utils.logging_config import setup_logging, get_logger
    >>> setup_logging(log_level="DEBUG", file_output=False)
    >>> logger = get_logger(__name__)
    >>> logger.debug("iteration 10: residual 3.2e-07")
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List, Optional

import colorlog

from .config import config

_logging_configured = False

_LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "bold_red",
}

ROTATE_BYTES = 10 * 1024 * 1024
ROTATE_BACKUPS = 5


def _level(name: Optional[str]) -> int:
    return getattr(logging, (name or config.LOG_LEVEL).upper(), logging.INFO)


def _console_handler(level: int, log_format: str) -> logging.Handler:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(colorlog.ColoredFormatter("%(log_color)s" + log_format, log_colors=_LOG_COLORS))
    return handler


def _file_handler(log_file: str, level: int, log_format: str,
                  max_bytes: int = ROTATE_BYTES, backup_count: int = ROTATE_BACKUPS) -> RotatingFileHandler:
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(log_format))
    return handler


def _file_handlers(root: logging.Logger) -> List[logging.Handler]:
    return [h for h in root.handlers if isinstance(h, RotatingFileHandler)]


def _console_handlers(root: logging.Logger) -> List[logging.Handler]:
    return [h for h in root.handlers if not isinstance(h, RotatingFileHandler)]


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    log_format: Optional[str] = None,
    console_output: bool = True,
    file_output: bool = True,
    max_bytes: int = ROTATE_BYTES,
    backup_count: int = ROTATE_BACKUPS,
) -> None:
    """Configure the root logger once.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL (default config.LOG_LEVEL).
        log_file: Log file path (default config.LOG_FILE; empty disables the file).
        log_format: Record format (default config.LOG_FORMAT).
        console_output: Attach the colored stderr handler.
        file_output: Attach the rotating file handler.
        max_bytes: Rotation size.
        backup_count: Rotated files kept.

    Note:
        Later calls are ignored; use reconfigure_logging() to change the level.
    """
    global _logging_configured
    if _logging_configured:
        return

    level = _level(log_level)
    log_file = log_file or config.LOG_FILE
    log_format = log_format or config.LOG_FORMAT

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()
    if console_output:
        root.addHandler(_console_handler(level, log_format))
    if file_output and log_file:
        root.addHandler(_file_handler(log_file, level, log_format, max_bytes, backup_count))

    _logging_configured = True
    root.debug("Logging configured (level=%s, file=%s)", logging.getLevelName(level),
               log_file if file_output else None)


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, typically ``get_logger(__name__)``."""
    return logging.getLogger(name)


def reconfigure_logging(
    log_level: Optional[str] = None,
    console_output: Optional[bool] = None,
    file_output: Optional[bool] = None,
) -> None:
    """Change the level or toggle handlers after setup (the CLI applies --log-level here)."""
    root = logging.getLogger()

    if log_level:
        level = _level(log_level)
        root.setLevel(level)
        for handler in root.handlers:
            handler.setLevel(level)
        root.debug("Log level changed to %s", log_level)

    if console_output is True and not _console_handlers(root):
        root.addHandler(_console_handler(root.level, config.LOG_FORMAT))
    elif console_output is False:
        for handler in _console_handlers(root):
            root.removeHandler(handler)

    if file_output is True and not _file_handlers(root) and config.LOG_FILE:
        root.addHandler(_file_handler(config.LOG_FILE, root.level, config.LOG_FORMAT))
    elif file_output is False:
        for handler in _file_handlers(root):
            root.removeHandler(handler)
            handler.close()


def log_exception(logger: logging.Logger, message: str, exc: Exception) -> None:
    """Log a failure with its traceback."""
    logger.error(f"{message}: {exc}", exc_info=True)


def log_performance(logger: logging.Logger, operation: str, duration: float) -> None:
    """Log the wall time of a command or stage.

    Example:
        >>> start = time.time()
        >>> wave = solve_wave(params, 0.1, grid)
        >>> log_performance(logger, "solve", time.time() - start)
    """
    logger.info(f"Performance: {operation} completed in {duration:.2f}s")


if not _logging_configured:
    try:
        setup_logging()
    except OSError as e:
        logging.basicConfig(level=logging.INFO, format=config.LOG_FORMAT)
        logging.warning(f"File logging unavailable, using console only: {e}")
