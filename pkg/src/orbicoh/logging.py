# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Set up logging for orbicoh.

Console output goes to stderr so that rendered reports on stdout stay clean.
"""

from __future__ import annotations

from pathlib import Path
import logging
import logging.config

from orbicoh.settings import settings

logger = logging.getLogger(__name__)


def console_level(debug: bool = False, quiet: bool = False) -> int:
    """Return the console log level for the given command line switches."""
    if debug:
        return logging.DEBUG
    if quiet:
        return logging.WARNING
    return logging.INFO


def init_logging(
    debug: bool = False,
    path: Path | None = settings.LOG_FILE,
    log_max_size: int = settings.LOG_MAX_SIZE,
    log_backups: int = settings.LOG_BACKUPS,
    quiet: bool = False,
):
    """Initialize the orbicoh logger.

    :param path: the rotating log file, or None to log to the console only
    :param quiet: only show warnings and errors on the console
    """
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "stream": "ext://sys.stderr",
            "level": console_level(debug, quiet),
        },
    }
    if path is not None:
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": "standard",
            "filename": path,
            "maxBytes": log_max_size,
            "backupCount": log_backups,
            "encoding": "utf8",
            "level": logging.DEBUG,
        }
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "standard": {
                    "format": "%(asctime)-13s %(module)-10s %(levelname)-8s %(message)s"
                }
            },
            "handlers": handlers,
            "loggers": {
                "orbicoh": {
                    "handlers": list(handlers),
                    "level": logging.DEBUG,
                },
            },
        }
    )
    logger.debug(f"Logging configured with log file @ {path}.")
