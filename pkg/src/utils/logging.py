import logging
from logging import getLogger
from typing import Optional
import os
import sys

from colorama import Fore, Style


class ColoredFormatter(logging.Formatter):
    """One-letter coloured level, bright header, dimmed message"""

    COLORS = {
        "DEBUG": Fore.CYAN,
        "INFO": Fore.GREEN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.MAGENTA,
    }

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelname, "")
        # format a copy, the file handler sees the same record
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{Style.BRIGHT}{color}{record.levelname[0]}{Style.RESET_ALL}"
        formatted = super().format(record)
        parts = formatted.split(": ", 1)
        if len(parts) != 2:
            return formatted
        message_style = Style.DIM + Fore.WHITE if record.levelno == logging.DEBUG else Fore.LIGHTBLACK_EX
        return Style.BRIGHT + parts[0] + Style.RESET_ALL + ": " + message_style + parts[1] + Style.RESET_ALL


def logging_provider(file: str, cls_instance: Optional[object] = None) -> logging.Logger:
    """provides a logger for the given file and class name

    Records go to stderr (stdout carries CSV/JSON artifacts). When
    `ANQIE_LOG_FILE` is set, a plain copy is appended to that file.
    `ANQIE_LOG_LEVEL` sets the level, default INFO.
    """
    logger_name = f"{file}"
    if cls_instance:
        logger_name += f".{cls_instance.__class__.__qualname__}"
    log = getLogger(logger_name)
    log.setLevel(os.getenv("ANQIE_LOG_LEVEL", "INFO").upper())
    if log.handlers:
        return log
    log.propagate = False

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setFormatter(
        ColoredFormatter("%(levelname)s %(asctime)s %(name)s: %(message)s", datefmt="%H:%M:%S")
    )
    log.addHandler(stderr_handler)

    log_file = os.getenv("ANQIE_LOG_FILE")
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s: %(message)s"))
        log.addHandler(file_handler)
    return log
