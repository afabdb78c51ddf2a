"""Logging setup for the nilsolv logger tree."""

import logging
import sys
from typing import Optional

from config import LOG_LEVEL

_HANDLER_NAME = "nilsolv-stderr"


def configure_logging(level: Optional[str] = None, timestamps: bool = False) -> logging.Logger:
    """Install a single stderr handler on the `nilsolv` logger."""
    logger = logging.getLogger("nilsolv")
    logger.setLevel((level or LOG_LEVEL).upper())

    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    fmt = "%(levelname)s %(name)s: %(message)s"
    if timestamps:
        fmt = "%(asctime)s " + fmt
    handler.setFormatter(logging.Formatter(fmt))
    logger.addHandler(handler)
    logger.propagate = False
    return logger
