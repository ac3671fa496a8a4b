"""Open LBP texture toolkit package."""
import structlog

__version__ = "0.1.0"

# Library use gets the same stderr logging as the CLI unless the host
# application has configured structlog itself.
if not structlog.is_configured():
    from openlbp.core.logging import setup_logging

    setup_logging()
