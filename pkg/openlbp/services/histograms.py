"""
Histogram descriptors: global and grid LBP histograms, LBP-TOP, contrast
histograms and multi-scale concatenation.
"""
from typing import List, Sequence, Tuple, Union

import numpy as np
import structlog

from openlbp.core.exceptions import (
    EmptyInputError,
    ImageTooSmallError,
    InvalidParameterError,
    MismatchError,
)
from openlbp.schemas.descriptor import (
    CodeImage,
    CodeMapping,
    Descriptor,
    MappingKind,
    SamplingSpec,
)
from openlbp.schemas.image import GrayImage, VideoVolume
from openlbp.services.lbp import circular_codes, generalized_lbp
from openlbp.services.mappings import build_code_mapping, map_codes

logger = structlog.get_logger()

Grid = Tuple[int, int]


def _check_mapping(mapping: CodeMapping, P: int) -> None:
    if mapping.P != P:
        raise MismatchError(
            f"mapping built for P={mapping.P} applied to P={P} codes",
            code="mapping-mismatch",
        )


def _bin_counts(bins: np.ndarray, bin_count: int, normalize: bool) -> np.ndarray:
    counts = np.bincount(bins.ravel(), minlength=bin_count).astype(np.float64)
    if normalize and bins.size:
        counts /= bins.size
    return counts


def window_edges(length: int, parts: int) -> List[int]:
    """Floor-division cut points; the remainder joins the last window."""
    step = length // parts
    return [i * step for i in range(parts)] + [length]


def grid_histogram(
    code_image: CodeImage, mapping: CodeMapping, grid: Grid, normalize: bool
) -> Descriptor:
    """Per-window histograms of a code image, concatenated window-row-major."""
    _check_mapping(mapping, code_image.P)
    gx, gy = grid
    if gx < 1 or gy < 1:
        raise InvalidParameterError(f"grid counts must be positive, got {gx}x{gy}")
    rows, cols = code_image.interior_shape
    if cols // gx < 1 or rows // gy < 1:
        raise ImageTooSmallError(
            f"{cols}x{rows} interior cannot hold a {gx}x{gy} grid", code="empty-window"
        )

    bins = map_codes(mapping, code_image.codes)
    row_edges, col_edges = window_edges(rows, gy), window_edges(cols, gx)
    windows = [
        _bin_counts(
            bins[row_edges[r]:row_edges[r + 1], col_edges[c]:col_edges[c + 1]],
            mapping.bin_count,
            normalize,
        )
        for r in range(gy)
        for c in range(gx)
    ]
    return Descriptor(
        values=np.concatenate(windows),
        bins_per_window=mapping.bin_count,
        grid=(gx, gy),
        normalized=normalize,
        spec=code_image.spec,
        mapping_kind=mapping.kind,
        operator=code_image.operator,
    )


def lbp_histogram(codes: CodeImage, mapping: CodeMapping, normalize: bool) -> Descriptor:
    """Occurrence count of every mapped code over the interior."""
    return grid_histogram(codes, mapping, (1, 1), normalize)


def grid_descriptor(
    image: GrayImage,
    spec: SamplingSpec,
    mapping: CodeMapping,
    grid: Grid,
    normalize: bool,
) -> Descriptor:
    _check_mapping(mapping, spec.P)
    return grid_histogram(generalized_lbp(image, spec), mapping, grid, normalize)


def lbp_top(
    volume: VideoVolume,
    spec_xy: SamplingSpec,
    spec_xt: SamplingSpec,
    spec_yt: SamplingSpec,
    mapping: CodeMapping,
    normalize: bool,
) -> Descriptor:
    """LBP on three orthogonal planes, histograms concatenated XY, XT, YT.

    ``spec_xy.R`` is the spatial radius on X and Y in every plane; the ``R`` of
    ``spec_xt`` and ``spec_yt`` is the temporal radius, so the XT and YT rings
    are ellipses when the two differ. All three planes are evaluated over the
    same interior voxels, so per-plane totals agree.
    """
    for spec in (spec_xy, spec_xt, spec_yt):
        _check_mapping(mapping, spec.P)

    array = volume.as_array()
    margin_t = max(spec_xt.margin, spec_yt.margin)
    margin_y = margin_x = spec_xy.margin
    frames, height, width = array.shape
    if frames - 2 * margin_t < 1 or height - 2 * margin_y < 1 or width - 2 * margin_x < 1:
        raise ImageTooSmallError(
            f"{width}x{height}x{frames} volume has no interior voxels for margins "
            f"(x={margin_x}, y={margin_y}, t={margin_t})",
            code="volume-too-small",
        )

    margins = (margin_t, margin_y, margin_x)
    # (sampling, horizontal axis, vertical axis) of each plane in (t, y, x) order;
    # the vertical radius is the plane's R, the horizontal one is spatial
    planes = (
        (spec_xy, 2, 1),
        (spec_xt, 2, 0),
        (spec_yt, 1, 0),
    )
    histograms = [
        _bin_counts(
            map_codes(
                mapping,
                circular_codes(array, margins, spec, axis_x, axis_y, radius_x=spec_xy.R),
            ),
            mapping.bin_count,
            normalize,
        )
        for spec, axis_x, axis_y in planes
    ]
    logger.debug("LBP-TOP computed", frames=frames, width=width, height=height)
    return Descriptor(
        values=np.concatenate(histograms),
        bins_per_window=mapping.bin_count,
        grid=(1, 1),
        normalized=normalize,
        spec=spec_xy,
        mapping_kind=mapping.kind,
        planes=3,
        operator="top",
    )


def fit_quantization_edges(values: Union[Sequence[float], np.ndarray], bins: int) -> np.ndarray:
    """Equal-frequency cut points for quantizing contrast or VAR values.

    Returns ``bins - 1`` ascending inner edges learned from training values.
    """
    if bins < 1:
        raise InvalidParameterError(f"need at least one bin, got {bins}")
    data = np.asarray(values, dtype=np.float64).ravel()
    if data.size == 0:
        raise EmptyInputError("cannot learn quantization edges from no values")
    if bins == 1:
        return np.zeros(0)
    return np.quantile(data, np.linspace(0.0, 1.0, bins + 1)[1:-1])


def contrast_histogram(
    values: Union[Sequence[float], np.ndarray], edges: np.ndarray, normalize: bool
) -> np.ndarray:
    """Histogram of values over the bins delimited by ``edges``.

    Bin ``i`` holds values in ``[edges[i-1], edges[i])``; the outer bins are open.
    """
    data = np.asarray(values, dtype=np.float64).ravel()
    bins = np.searchsorted(np.asarray(edges, dtype=np.float64), data, side="right")
    return _bin_counts(bins, len(edges) + 1, normalize)


def multiscale_features(
    image: GrayImage,
    specs: Sequence[SamplingSpec],
    kind: Union[MappingKind, str],
    grid: Grid,
    normalize: bool,
) -> np.ndarray:
    """Grid descriptors at several (P, R) scales, concatenated in ``specs`` order."""
    if not specs:
        raise EmptyInputError("at least one sampling scale is required")
    parts = [
        grid_descriptor(image, spec, build_code_mapping(kind, spec.P), grid, normalize).values
        for spec in specs
    ]
    return np.concatenate(parts)
