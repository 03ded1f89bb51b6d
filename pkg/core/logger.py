"""
Structured logging for shaketab.
Human-readable coloured output for terminals, JSON lines for log collection.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from pythonjsonlogger import jsonlogger


ROOT_LOGGER = "shaketab"


class HumanFormatter(logging.Formatter):
    """Format logs as human-readable text."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[41m",
        "RESET": "\033[0m",
    }

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelname, "") if self.use_color else ""
        reset = self.COLORS["RESET"] if self.use_color else ""

        log_msg = f"{color}[{record.levelname}]{reset} {record.getMessage()}"

        if record.levelno >= logging.WARNING or record.levelno <= logging.DEBUG:
            log_msg += f" ({record.module}:{record.funcName}:{record.lineno})"

        if record.exc_info:
            log_msg += f"\n{self.formatException(record.exc_info)}"

        return log_msg


def json_formatter() -> logging.Formatter:
    return jsonlogger.JsonFormatter(
        "%(asctime)s %(levelname)s %(name)s %(message)s %(module)s %(funcName)s %(lineno)d",
        rename_fields={"asctime": "timestamp", "levelname": "level", "name": "logger"},
    )


def setup_logging(
    name: str = ROOT_LOGGER,
    level: str = "INFO",
    log_file: Optional[Path] = None,
    use_json: bool = False,
) -> logging.Logger:
    """
    Configure the shaketab logger tree.

    Args:
        name: Logger name
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file path for logging
        use_json: Use JSON formatting

    Returns:
        Configured logger instance
    """

    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))
    logger.propagate = False

    logger.handlers.clear()

    # Console goes to stderr so stdout stays clean for reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level.upper()))
    console_handler.setFormatter(
        json_formatter() if use_json else HumanFormatter(use_color=sys.stderr.isatty())
    )
    logger.addHandler(console_handler)

    if log_file:
        add_file_handler(logger, log_file, use_json=use_json)

    return logger


def add_file_handler(
    logger: logging.Logger, log_file: Path, use_json: bool = False
) -> logging.FileHandler:
    """Attach a file handler (always uncoloured) and return it so callers can detach it."""
    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
    file_handler.setLevel(logger.level)
    file_handler.setFormatter(json_formatter() if use_json else HumanFormatter(use_color=False))
    logger.addHandler(file_handler)
    return file_handler


_configured = False


def configure_from_settings(force: bool = False) -> logging.Logger:
    """Configure the root shaketab logger once from process settings."""
    global _configured
    if _configured and not force:
        return logging.getLogger(ROOT_LOGGER)
    from config.settings import settings

    settings.validate_paths()
    _configured = True
    return setup_logging(
        name=ROOT_LOGGER,
        level=settings.log_level,
        log_file=settings.LOG_FILE,
        use_json=settings.LOG_JSON,
    )


def get_logger(name: str = __name__) -> logging.Logger:
    """Get a child of the shaketab logger, configuring the tree on first use."""
    configure_from_settings()
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
