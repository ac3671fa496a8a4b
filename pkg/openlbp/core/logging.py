"""
Logging configuration for Open LBP.
"""
import logging
import sys
from typing import Any, Dict, Optional

import structlog

from openlbp.core.config import settings


def setup_logging() -> None:
    """Configure structured logging for the toolkit.

    Log lines go to stderr; stdout is reserved for command output.
    """
    level = getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.add_log_level,
            # Caller information only in debug mode
            structlog.processors.CallsiteParameterAdder(
                parameters=[
                    structlog.processors.CallsiteParameter.FILENAME,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                    structlog.processors.CallsiteParameter.LINENO,
                ]
            ) if settings.DEBUG else structlog.processors.CallsiteParameterAdder(parameters=[]),
            structlog.dev.ConsoleRenderer(colors=False)
            if settings.DEBUG or settings.LOG_FORMAT == "console"
            else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level)


def get_logger(context: Optional[Dict[str, Any]] = None) -> structlog.BoundLogger:
    """Get a logger with optional context."""
    logger = structlog.get_logger()
    if context:
        logger = logger.bind(**context)
    return logger


class RunLogger:
    """Event logger for descriptor extraction and model fitting runs."""

    def __init__(self) -> None:
        self.logger = structlog.get_logger("run")

    def log_descriptor_extracted(
        self, source: str, operator: str, length: int, details: Optional[Dict[str, Any]] = None
    ) -> None:
        """Log one extracted descriptor."""
        self.logger.info(
            "Descriptor extracted",
            source=source,
            operator=operator,
            length=length,
            details=details or {},
            event_type="descriptor_extracted",
        )

    def log_model_fitted(
        self, model: str, samples: int, details: Optional[Dict[str, Any]] = None
    ) -> None:
        """Log a fitted model (normalizer, k-means, PCA, ...)."""
        self.logger.info(
            "Model fitted",
            model=model,
            samples=samples,
            details=details or {},
            event_type="model_fitted",
        )

    def log_command_finished(
        self, command: str, exit_code: int, details: Optional[Dict[str, Any]] = None
    ) -> None:
        """Log the end of a CLI command."""
        self.logger.info(
            "Command finished",
            command=command,
            exit_code=exit_code,
            details=details or {},
            event_type="command_finished",
        )


run_logger = RunLogger()
