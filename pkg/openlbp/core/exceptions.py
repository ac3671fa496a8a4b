"""
Error hierarchy for Open LBP.

Every error carries a stable kebab-case ``code``; the CLI maps
``UsageError`` to exit status 2 and all other errors to exit status 1.
"""
from typing import Optional


class OpenLBPError(Exception):
    """Base class for all toolkit errors."""

    code: str = "error"

    def __init__(self, message: str, code: Optional[str] = None) -> None:
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class RasterFormatError(OpenLBPError, ValueError):
    """Malformed or unsupported PGM/PPM content."""

    code = "malformed-header"

    def __init__(self, message: str, offset: int, code: Optional[str] = None) -> None:
        super().__init__(f"{message} (byte offset {offset})", code)
        self.offset = offset


class OutOfRangeIntensityError(OpenLBPError, ValueError):
    code = "out-of-range-intensity"


class CoordinateOutOfBoundsError(OpenLBPError, ValueError):
    code = "coordinate-out-of-bounds"


class EmptyInputError(OpenLBPError, ValueError):
    code = "empty-input"


class ImageTooSmallError(OpenLBPError, ValueError):
    code = "image-too-small"


class InvalidParameterError(OpenLBPError, ValueError):
    code = "invalid-parameter"


class MismatchError(OpenLBPError, ValueError):
    code = "dimension-mismatch"


class NotNormalizedError(OpenLBPError, ValueError):
    code = "unnormalized-intersection"


class InsufficientDataError(OpenLBPError, ValueError):
    code = "insufficient-training-data"


class InvalidMatrixError(OpenLBPError, ValueError):
    code = "asymmetric-input"


class DataFileError(OpenLBPError):
    """Unreadable row or value in an input data file."""

    code = "malformed-data-file"

    def __init__(self, message: str, path: str, line: Optional[int] = None) -> None:
        super().__init__(message)
        self.path = path
        self.line = line

    def __str__(self) -> str:
        where = self.path if self.line is None else f"{self.path}:{self.line}"
        return f"{where}: {self.message}"


class UsageError(OpenLBPError):
    """Bad command line."""

    code = "usage"
