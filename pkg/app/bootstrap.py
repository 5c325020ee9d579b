import logging
from typing import Optional, Sequence

from app import cli
from app.config.settings import Settings
from app.infra.logging import setup_logging

_l = logging.getLogger(__name__)
kernel_logger = logging.LoggerAdapter(_l, extra={"tag": "Kernel"})


def run(argv: Optional[Sequence[str]] = None) -> int:
    # Load settings
    settings = Settings.model_validate({})

    # Configure logging
    setup_logging(settings.log_level, settings.log_dir)
    kernel_logger.info("Bootstrapping qdot...")

    try:
        return cli.main(argv, settings=settings)
    except Exception as e:
        kernel_logger.exception(f"Fatal during run: {e}")
        raise
