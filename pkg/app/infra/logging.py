import logging
import logging.config
import os
from typing import Optional


class DefaultTagFilter(logging.Filter):
    """Gives records logged without a LoggerAdapter a '-' tag so the formats below never fail."""

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "tag"):
            record.tag = "-"
        return True


def setup_logging(level: str = "INFO", logs_dir: Optional[str] = "logs") -> None:
    """
    Console logging goes to stderr so stdout stays free for CSV output.
    A rotating file handler is added when `logs_dir` is set.
    """
    DEFAULT_FORMAT = "%(asctime)s | %(name)-27s | [%(levelname)-8s] (%(tag)s) %(message)s"
    COMPACT_FORMAT = "%(asctime)s [%(levelname)-8s] (%(tag)s) %(message)s"

    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "compact",
            "filters": ["default_tag"],
            "stream": "ext://sys.stderr",
        },
    }
    if logs_dir:
        os.makedirs(logs_dir, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": "default",
            "filters": ["default_tag"],
            "encoding": "utf-8",
            "filename": os.path.join(logs_dir, "qdot.log"),
            "maxBytes": 10_000_000,
            "backupCount": 5,
        }

    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "filters": {"default_tag": {"()": DefaultTagFilter}},
            "formatters": {
                "default": {"format": DEFAULT_FORMAT, "datefmt": "%Y-%m-%d %H:%M:%S"},
                "compact": {"format": COMPACT_FORMAT, "datefmt": "%Y-%m-%d %H:%M:%S"},
            },
            "handlers": handlers,
            "root": {"handlers": list(handlers), "level": level.upper()},
        }
    )
