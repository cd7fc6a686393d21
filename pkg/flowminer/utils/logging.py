"""Package logging: one ``flowminer`` logger tree, console on stderr.

Pipeline commands print report tables on stdout, so log records never go
there. Module loggers come from ``get_logger(__name__)`` and inherit the
handlers installed on the package root by ``configure_logger``.
"""

import functools
import logging
import logging.handlers
import sys
import time
from pathlib import Path
from typing import Callable, Optional, TypeVar, Union, cast

F = TypeVar('F', bound=Callable)

ROOT_LOGGER = 'flowminer'

# rotating file handler limits
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Get a logger with the specified name and level.

    Args:
        name: Dotted logger name, normally ``__name__`` (e.g. 'flowminer.mining.core')
        level: Optional level set on this logger only

    Returns:
        The logger
    """
    logger = logging.getLogger(name)
    if level is not None:
        logger.setLevel(level)
    return logger


def configure_logger(
    level: int = logging.INFO,
    log_file: Optional[Union[str, Path]] = None,
    console: bool = True,
    format_str: Optional[str] = None,
    date_format: Optional[str] = None,
) -> logging.Logger:
    """
    Install handlers on the package root logger, replacing any previous ones.

    Args:
        level: Level of the package root logger
        log_file: Optional log file; its directory is created and the file rotates
        console: Whether to log to standard error
        format_str: Record format; defaults to ``LOG_CONFIG['log_format']`` in the settings
        date_format: Date format; defaults to ``LOG_CONFIG['log_datefmt']``

    Returns:
        The package root logger
    """
    from ..config.settings import settings

    formatter = logging.Formatter(
        format_str or settings.LOG_CONFIG['log_format'],
        datefmt=date_format or settings.LOG_CONFIG['log_datefmt'],
    )

    root = logging.getLogger(ROOT_LOGGER)
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    handlers: list = []
    if console:
        handlers.append(logging.StreamHandler(sys.stderr))
    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(
            logging.handlers.RotatingFileHandler(path, maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS)
        )
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    return root


def set_log_level(level: int) -> None:
    """Change the level of the package root logger, keeping its handlers."""
    logging.getLogger(ROOT_LOGGER).setLevel(level)


def timed(func: F) -> F:
    """Log the wall time of each call to ``func`` on its module's logger."""
    logger = get_logger(func.__module__)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            logger.info("%s completed in %.3fs", func.__qualname__, time.perf_counter() - start)

    return cast(F, wrapper)


def initialize() -> logging.Logger:
    """Configure package logging from the environment settings."""
    from ..config.settings import settings

    level_name = str(settings.LOG_CONFIG['default_level']).upper()
    level = getattr(logging, level_name, logging.INFO)
    return configure_logger(level=level, log_file=settings.log_file_path())
