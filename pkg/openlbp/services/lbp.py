"""
Per-pixel LBP operators: the basic 3x3 operator with contrast, the circular
(P, R) operator, the VAR measure and the median-robust variant.

Geometry: sample ``p`` of a ring sits at image offset
``(R cos(2 pi p / P), -R sin(2 pi p / P))`` with ``y`` growing downward, so
sample 0 is to the right and increasing ``p`` turns counter-clockwise on
screen. Bit ``p`` of a code is set when sample ``p`` >= center - 1e-9.
"""
from typing import Optional, Sequence, Tuple

import numpy as np
import structlog

from openlbp.core.exceptions import (
    CoordinateOutOfBoundsError,
    ImageTooSmallError,
    InvalidParameterError,
)
from openlbp.schemas.descriptor import CodeImage, SamplingSpec, TextureStatsMap
from openlbp.schemas.image import GrayImage
from openlbp.services.imaging import (
    interior,
    median_filter,
    sample_at_offset,
    shifted_bilinear,
)

logger = structlog.get_logger()

TIE_EPSILON = 1e-9
SNAP_TOLERANCE = 1e-9

# (dx, dy) of bits 0..7 for the 3x3 operator: weights 1, 2, 4 on the top row,
# 8 right, 16, 32, 64 along the bottom row right-to-left, 128 left.
BASIC_NEIGHBORS: Tuple[Tuple[int, int], ...] = (
    (-1, -1), (0, -1), (1, -1),
    (1, 0),
    (1, 1), (0, 1), (-1, 1),
    (-1, 0),
)


def ring_offsets(spec: SamplingSpec, radius_x: Optional[float] = None) -> np.ndarray:
    """``(P, 2)`` array of ``(dx, dy)`` sample offsets; near-integers are snapped.

    ``radius_x`` stretches the ring along the horizontal axis (an ellipse with
    vertical radius ``R``); by default the ring is circular.
    """
    horizontal = spec.R if radius_x is None else radius_x
    angles = 2.0 * np.pi * np.arange(spec.P) / spec.P
    offsets = np.column_stack((horizontal * np.cos(angles), -spec.R * np.sin(angles)))
    nearest = np.rint(offsets)
    snapped = np.where(np.abs(offsets - nearest) < SNAP_TOLERANCE, nearest, offsets)
    return snapped + 0.0  # drop negative zeros


def _require_interior(height: int, width: int, margin: int, what: str = "image") -> None:
    if height - 2 * margin < 1 or width - 2 * margin < 1:
        raise ImageTooSmallError(
            f"{what} {width}x{height} has no interior pixels for margin {margin}"
        )


def basic_lbp(image: GrayImage) -> Tuple[CodeImage, TextureStatsMap]:
    """3x3 LBP codes with per-pixel contrast ``C`` and ``VAR``.

    ``C`` is the mean of the neighbours at or above the center minus the mean
    of those below it, and 0 when either side is empty.
    """
    pixels = image.pixels
    height, width = pixels.shape
    if height < 3 or width < 3:
        raise ImageTooSmallError(f"basic LBP needs at least 3x3, got {width}x{height}")

    center = pixels[1:-1, 1:-1]
    codes = np.zeros(center.shape, dtype=np.uint8)
    upper_sum = np.zeros(center.shape)
    upper_count = np.zeros(center.shape)
    total = np.zeros(center.shape)
    squares = np.zeros(center.shape)
    for bit, (dx, dy) in enumerate(BASIC_NEIGHBORS):
        neighbor = pixels[1 + dy:height - 1 + dy, 1 + dx:width - 1 + dx]
        above = neighbor >= center
        codes |= above.view(np.uint8) << np.uint8(bit)
        upper_sum += neighbor * above
        upper_count += above
        total += neighbor
        squares += neighbor * neighbor

    lower_count = 8 - upper_count
    lower_sum = total - upper_sum
    both = (upper_count > 0) & (lower_count > 0)
    contrast = np.zeros(center.shape)
    np.divide(upper_sum, upper_count, out=contrast, where=both)
    lower_mean = np.zeros(center.shape)
    np.divide(lower_sum, lower_count, out=lower_mean, where=both)
    contrast -= lower_mean

    mean = total / 8.0
    var = np.maximum(squares / 8.0 - mean * mean, 0.0)

    code_image = CodeImage(
        width=width,
        height=height,
        margin=1,
        spec=SamplingSpec(P=8, R=1.0),
        operator="basic",
        codes=codes.astype(np.int64),
    )
    return code_image, TextureStatsMap(contrast=contrast, var=var)


def ring_samples(image: GrayImage, cx: int, cy: int, spec: SamplingSpec) -> np.ndarray:
    """The ``P`` interpolated intensities on the ring around pixel ``(cx, cy)``."""
    offsets = ring_offsets(spec)
    low = np.floor(offsets)
    high = np.where(offsets == low, low, low + 1)
    if (
        cx + low[:, 0].min() < 0
        or cy + low[:, 1].min() < 0
        or cx + high[:, 0].max() > image.width - 1
        or cy + high[:, 1].max() > image.height - 1
    ):
        raise CoordinateOutOfBoundsError(
            f"ring of radius {spec.R} around ({cx}, {cy}) leaves the "
            f"{image.width}x{image.height} image",
            code="out-of-bounds-ring",
        )
    return np.array(
        [sample_at_offset(image.pixels, cx, cy, float(dx), float(dy)) for dx, dy in offsets]
    )


def circular_codes(
    array: np.ndarray,
    margins: Sequence[int],
    spec: SamplingSpec,
    axis_x: int = -1,
    axis_y: int = -2,
    radius_x: Optional[float] = None,
) -> np.ndarray:
    """Circular LBP codes for the interior of ``array`` in the plane of two axes."""
    center = interior(array, margins)
    threshold = center - TIE_EPSILON
    codes = np.zeros(center.shape, dtype=np.int64)
    for bit, (dx, dy) in enumerate(ring_offsets(spec, radius_x)):
        sample = shifted_bilinear(array, margins, float(dx), float(dy), axis_x, axis_y)
        codes |= (sample >= threshold).astype(np.int64) << bit
    return codes


def generalized_lbp(image: GrayImage, spec: SamplingSpec) -> CodeImage:
    """Circular LBP(P, R) codes with bilinear interpolation of off-grid samples."""
    margin = spec.margin
    _require_interior(image.height, image.width, margin)
    codes = circular_codes(image.pixels, (margin, margin), spec)
    return CodeImage(width=image.width, height=image.height, margin=margin, spec=spec, codes=codes)


def var_measure(samples: Sequence[float], center: float) -> float:
    """Population variance of ``samples - center``.

    The center cancels out, so it is not subtracted; this keeps results
    bit-identical for every center.
    """
    values = np.asarray(samples, dtype=np.float64)
    if values.size < 2:
        raise InvalidParameterError("VAR needs at least two samples")
    return float(np.var(values))


def var_image(image: GrayImage, spec: SamplingSpec) -> np.ndarray:
    """Per-pixel VAR over the ring for the interior region."""
    margin = spec.margin
    _require_interior(image.height, image.width, margin)
    samples = np.stack(
        [
            shifted_bilinear(image.pixels, (margin, margin), float(dx), float(dy))
            for dx, dy in ring_offsets(spec)
        ]
    )
    return samples.var(axis=0)


def _round_half_away(values: np.ndarray) -> np.ndarray:
    # offsets within tolerance of k + 0.5 are treated as exact halves
    halves = np.floor(values) + 0.5
    values = np.where(np.abs(values - halves) < SNAP_TOLERANCE, halves, values)
    return np.sign(values) * np.floor(np.abs(values) + 0.5) + 0.0


def median_offsets(spec: SamplingSpec) -> np.ndarray:
    """Ring offsets rounded to whole pixels, halves away from zero."""
    return _round_half_away(ring_offsets(spec))


def median_robust_lbp(image: GrayImage, spec: SamplingSpec, window: int) -> CodeImage:
    """LBP on medians: center and ring values become medians of ``window`` x ``window``
    integer-pixel blocks around their rounded positions.

    A 1x1 window has nothing to take a median over, so it reads each sample at
    its exact interpolated position and equals ``generalized_lbp``.
    """
    if window < 1 or window % 2 == 0:
        raise InvalidParameterError(f"median window must be odd and positive, got {window}")
    if window == 1:
        return generalized_lbp(image, spec)

    half = window // 2
    margin = spec.margin + half
    _require_interior(image.height, image.width, margin)

    medians = median_filter(image.pixels, window)
    inner = (spec.margin, spec.margin)
    center = interior(medians, inner)
    threshold = center - TIE_EPSILON
    codes = np.zeros(center.shape, dtype=np.int64)
    for bit, (dx, dy) in enumerate(median_offsets(spec)):
        sample = shifted_bilinear(medians, inner, float(dx), float(dy))
        codes |= (sample >= threshold).astype(np.int64) << bit

    logger.debug("Median-robust codes computed", window=window, P=spec.P, R=spec.R)
    return CodeImage(
        width=image.width,
        height=image.height,
        margin=margin,
        spec=spec,
        operator="median",
        codes=codes,
    )
