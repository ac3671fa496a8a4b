"""
Raster I/O and the sampling primitives shared by every descriptor.

Only 8-bit netpbm rasters are accepted: ``P2`` (ASCII gray), ``P5`` (binary
gray) and ``P6`` (binary RGB, converted to luma 0.299 R + 0.587 G + 0.114 B).
"""
import math
from pathlib import Path
from typing import Dict, Sequence, Tuple, Union

import numpy as np
import structlog
from numpy.lib.stride_tricks import sliding_window_view

from openlbp.core.exceptions import (
    CoordinateOutOfBoundsError,
    DataFileError,
    EmptyInputError,
    InvalidParameterError,
    OutOfRangeIntensityError,
    RasterFormatError,
)
from openlbp.schemas.image import GrayImage, RasterFormat, RasterHeader, VideoVolume

logger = structlog.get_logger()

LUMA_WEIGHTS = (0.299, 0.587, 0.114)
MAX_VALUE = 255
FRAME_SUFFIXES = (".pgm", ".ppm")

_WHITESPACE = b" \t\n\r\x0b\x0c"
_COMMENT = ord("#")


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int, int]:
    """Return the next header token, skipping whitespace and ``#`` comments."""
    size = len(data)
    while pos < size:
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos] == _COMMENT:
            while pos < size and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < size and data[pos] not in _WHITESPACE and data[pos] != _COMMENT:
        pos += 1
    return data[start:pos], start, pos


def parse_header(data: bytes) -> RasterHeader:
    """Parse a PGM/PPM header and locate its payload."""
    magic = data[:2]
    try:
        raster_format = RasterFormat(magic.decode("ascii"))
    except (UnicodeDecodeError, ValueError):
        raise RasterFormatError(f"unknown magic number {magic!r}", 0) from None

    fields: Dict[str, int] = {}
    pos = 2
    for name in ("width", "height", "max_value"):
        token, start, pos = _next_token(data, pos)
        if not token:
            raise RasterFormatError(f"missing {name}", start)
        if not token.isdigit():
            raise RasterFormatError(f"{name} is not a positive integer: {token!r}", start)
        fields[name] = int(token)
        if fields[name] < 1:
            raise RasterFormatError(f"{name} must be positive", start)
        if name == "max_value" and fields[name] != MAX_VALUE:
            raise RasterFormatError(
                f"max value {fields[name]} not supported (only 255)",
                start,
                code="unsupported-max-value",
            )

    if pos < len(data) and data[pos] not in _WHITESPACE:
        raise RasterFormatError("expected whitespace after max value", pos)

    data_offset = pos if raster_format == RasterFormat.PGM_ASCII else min(pos + 1, len(data))
    return RasterHeader(
        format=raster_format,
        width=fields["width"],
        height=fields["height"],
        max_value=fields["max_value"],
        data_offset=data_offset,
    )


def _ascii_payload(data: bytes, header: RasterHeader) -> np.ndarray:
    count = header.width * header.height
    values = np.empty(count, dtype=np.float64)
    pos = header.data_offset
    for index in range(count):
        token, start, pos = _next_token(data, pos)
        if not token:
            raise RasterFormatError(
                f"expected {count} samples, found {index}", len(data), code="truncated-payload"
            )
        if not token.isdigit() or int(token) > header.max_value:
            raise RasterFormatError(
                f"invalid sample {token!r}", start, code="malformed-payload"
            )
        values[index] = int(token)
    return values.reshape(header.height, header.width)


def _binary_payload(data: bytes, header: RasterHeader) -> np.ndarray:
    count = header.width * header.height * header.channels
    available = len(data) - header.data_offset
    if available < count:
        raise RasterFormatError(
            f"payload has {available} of {count} bytes", len(data), code="truncated-payload"
        )
    raw = np.frombuffer(data, dtype=np.uint8, count=count, offset=header.data_offset)
    if header.channels == 1:
        return raw.astype(np.float64).reshape(header.height, header.width)
    rgb = raw.astype(np.float64).reshape(header.height, header.width, 3)
    red, green, blue = LUMA_WEIGHTS
    return red * rgb[..., 0] + green * rgb[..., 1] + blue * rgb[..., 2]


def load_image(data: bytes) -> GrayImage:
    """Decode PGM (P2/P5) or PPM (P6) bytes into a gray image."""
    header = parse_header(data)
    if header.format == RasterFormat.PGM_ASCII:
        pixels = _ascii_payload(data, header)
    else:
        pixels = _binary_payload(data, header)
    return GrayImage(pixels=pixels)


def save_pgm(image: GrayImage) -> bytes:
    """Encode as binary P5, rounding to the nearest integer (ties away from zero)."""
    pixels = image.pixels
    low, high = float(pixels.min()), float(pixels.max())
    if low < 0 or high > MAX_VALUE:
        raise OutOfRangeIntensityError(
            f"intensities must lie in [0, {MAX_VALUE}], found [{low:g}, {high:g}]"
        )
    quantized = np.floor(pixels + 0.5).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n{MAX_VALUE}\n".encode("ascii")
    return header + quantized.tobytes()


def read_image(path: Union[str, Path]) -> GrayImage:
    """Load an image file, reporting format problems against the path."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DataFileError(f"cannot read image: {exc.strerror}", str(path)) from exc
    try:
        return load_image(data)
    except RasterFormatError as exc:
        raise DataFileError(str(exc), str(path)) from exc


def write_pgm(path: Union[str, Path], image: GrayImage) -> None:
    Path(path).write_bytes(save_pgm(image))


def load_frames(directory: Union[str, Path]) -> VideoVolume:
    """Load every PGM/PPM in ``directory`` in lexicographic filename order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataFileError("not a directory", str(directory))
    paths = sorted(
        (p for p in directory.iterdir() if p.suffix.lower() in FRAME_SUFFIXES),
        key=lambda p: p.name,
    )
    if not paths:
        raise EmptyInputError(f"no .pgm/.ppm frames in {directory}")
    frames = tuple(read_image(p) for p in paths)
    shape = frames[0].shape
    for path, frame in zip(paths, frames):
        if frame.shape != shape:
            raise DataFileError(
                f"frame is {frame.width}x{frame.height}, expected {shape[1]}x{shape[0]}", str(path)
            )
    logger.debug("Frames loaded", directory=str(directory), frames=len(frames))
    return VideoVolume(frames=frames)


def _interpolation_terms(offset: float) -> Tuple[Tuple[int, float], ...]:
    """Integer taps and weights along one axis for a (possibly fractional) offset."""
    base = math.floor(offset)
    fraction = offset - base
    if fraction == 0:
        return ((base, 1.0),)
    return ((base, 1.0 - fraction), (base + 1, fraction))


def bilinear_sample(image: GrayImage, x: float, y: float) -> float:
    """Bilinear interpolation of the four pixels around ``(x, y)``.

    ``x`` runs along columns and ``y`` along rows; integer coordinates return
    the pixel value exactly.
    """
    width, height = image.width, image.height
    if not (math.isfinite(x) and math.isfinite(y)):
        raise CoordinateOutOfBoundsError(f"non-finite coordinate ({x}, {y})")
    if not (0 <= x <= width - 1 and 0 <= y <= height - 1):
        raise CoordinateOutOfBoundsError(
            f"({x}, {y}) outside [0, {width - 1}] x [0, {height - 1}]"
        )
    return sample_at_offset(image.pixels, 0, 0, x, y)


def sample_at_offset(pixels: np.ndarray, cx: int, cy: int, dx: float, dy: float) -> float:
    """Bilinear value at ``(cx + dx, cy + dy)``; weights come from the offset fractions."""
    total = 0.0
    for oy, wy in _interpolation_terms(dy):
        for ox, wx in _interpolation_terms(dx):
            total += (wx * wy) * float(pixels[cy + oy, cx + ox])
    return total


def shifted_bilinear(
    array: np.ndarray,
    margins: Sequence[int],
    dx: float,
    dy: float,
    axis_x: int = -1,
    axis_y: int = -2,
) -> np.ndarray:
    """Bilinear samples at offset ``(dx, dy)`` from every interior element at once.

    ``margins`` gives, per axis, how many border elements are excluded from the
    interior; each must be at least the integer reach of the offset.
    """
    ndim = array.ndim
    axis_x, axis_y = axis_x % ndim, axis_y % ndim
    total: Union[float, np.ndarray] = 0.0
    for oy, wy in _interpolation_terms(dy):
        for ox, wx in _interpolation_terms(dx):
            index = []
            for axis in range(ndim):
                shift = ox if axis == axis_x else oy if axis == axis_y else 0
                margin = margins[axis]
                index.append(slice(margin + shift, array.shape[axis] - margin + shift))
            total = total + (wx * wy) * array[tuple(index)]
    return np.asarray(total, dtype=np.float64)


def interior(array: np.ndarray, margins: Sequence[int]) -> np.ndarray:
    """View of ``array`` without ``margins[axis]`` elements on each side."""
    return array[tuple(slice(m, n - m) for m, n in zip(margins, array.shape))]


def median_of(values: Sequence[float]) -> float:
    """Median; even counts give the mean of the two middle values."""
    array = np.asarray(values, dtype=np.float64).ravel()
    if array.size == 0:
        raise EmptyInputError("median of an empty sequence")
    return float(np.median(array))


def median_filter(pixels: np.ndarray, window: int) -> np.ndarray:
    """Medians of every full ``window`` x ``window`` block (valid region only)."""
    if window < 1 or window % 2 == 0:
        raise InvalidParameterError(f"median window must be odd and positive, got {window}")
    if window == 1:
        return np.array(pixels, dtype=np.float64)
    blocks = sliding_window_view(np.asarray(pixels, dtype=np.float64), (window, window))
    return np.median(blocks, axis=(-2, -1))
