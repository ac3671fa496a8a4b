"""
Histogram dissimilarities used for nearest-neighbour matching.
"""
from typing import Sequence, Union

import numpy as np

from openlbp.core.exceptions import InvalidParameterError, MismatchError, NotNormalizedError
from openlbp.schemas.dataset import DistanceKind

NORMALIZATION_TOLERANCE = 1e-9

Vector = Union[Sequence[float], np.ndarray]


def _pair(h1: Vector, h2: Vector) -> tuple:
    a = np.asarray(h1, dtype=np.float64)
    b = np.asarray(h2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise MismatchError(
            f"histograms of length {a.size} and {b.size} cannot be compared",
            code="length-mismatch",
        )
    return a, b


def _chi_square_terms(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    total = a + b
    terms = np.zeros_like(total)
    np.divide((a - b) ** 2, total, out=terms, where=total > 0)
    return terms


def normalized_window_count(h: Vector) -> int:
    """Number of equal-length windows of ``h`` that each sum to 1.

    A normalized grid or LBP-TOP descriptor sums to its window count, so the
    count is read off the total and every window is then checked.
    """
    values = np.asarray(h, dtype=np.float64)
    total = float(values.sum())
    windows = int(round(total))
    if (
        windows >= 1
        and abs(total - windows) <= NORMALIZATION_TOLERANCE * windows
        and values.size % windows == 0
    ):
        sums = values.reshape(windows, -1).sum(axis=1)
        if np.all(np.abs(sums - 1.0) <= NORMALIZATION_TOLERANCE):
            return windows
    raise NotNormalizedError(
        f"histogram intersection needs each window to sum to 1, got total {total:.12g}"
    )


def histogram_distance(kind: Union[DistanceKind, str], h1: Vector, h2: Vector) -> float:
    """Dissimilarity of two equal-length histograms; 0 for identical inputs.

    ``histogram-intersection`` returns ``1 - sum(min(a, b)) / windows`` and
    requires both inputs to be normalized per window (see
    ``normalized_window_count``).
    """
    kind = DistanceKind(kind)
    a, b = _pair(h1, h2)
    if kind == DistanceKind.CHI_SQUARE:
        return float(_chi_square_terms(a, b).sum())
    if kind == DistanceKind.L1:
        return float(np.abs(a - b).sum())
    if kind == DistanceKind.L2:
        return float(np.sqrt(((a - b) ** 2).sum()))
    windows = normalized_window_count(a)
    if normalized_window_count(b) != windows:
        raise MismatchError(
            f"histograms with {windows} and {normalized_window_count(b)} windows cannot be compared",
            code="length-mismatch",
        )
    # measured against the actual totals so that distance(h, h) is exactly 0
    mass = (a.sum() + b.sum()) / 2.0
    return float((mass - np.minimum(a, b).sum()) / windows)


def weighted_chi_square(
    h1: Vector, h2: Vector, window_weights: Vector, bins_per_window: int
) -> float:
    """Chi-square with one weight per grid window (window-row-major)."""
    a, b = _pair(h1, h2)
    weights = np.asarray(window_weights, dtype=np.float64).ravel()
    if bins_per_window < 1 or weights.size * bins_per_window != a.size:
        raise MismatchError(
            f"{weights.size} window weights x {bins_per_window} bins "
            f"do not cover {a.size} values",
            code="length-mismatch",
        )
    if np.any(weights < 0):
        raise InvalidParameterError("window weights must be nonnegative")
    per_window = _chi_square_terms(a, b).reshape(weights.size, bins_per_window).sum(axis=1)
    return float((weights * per_window).sum())


def distances_to(kind: Union[DistanceKind, str], features: np.ndarray, query: Vector) -> np.ndarray:
    """Distance from ``query`` to every row of ``features``."""
    kind = DistanceKind(kind)
    rows = np.asarray(features, dtype=np.float64)
    point = np.asarray(query, dtype=np.float64)
    if rows.ndim != 2 or point.shape != (rows.shape[1],):
        raise MismatchError(
            f"query of length {point.size} against {rows.shape[-1]}-dimensional features",
            code="dimension-mismatch",
        )
    return np.array([histogram_distance(kind, row, point) for row in rows])


def pairwise_distances(features: np.ndarray, kind: Union[DistanceKind, str]) -> np.ndarray:
    """Symmetric ``(n, n)`` distance matrix with an exact zero diagonal."""
    kind = DistanceKind(kind)
    rows = np.asarray(features, dtype=np.float64)
    count = rows.shape[0]
    matrix = np.zeros((count, count))
    for i in range(count):
        for j in range(i + 1, count):
            matrix[i, j] = matrix[j, i] = histogram_distance(kind, rows[i], rows[j])
    return matrix
