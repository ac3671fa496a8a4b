"""
Dimensionality reduction for visualizing descriptor sets: PCA and classical
(Torgerson) multidimensional scaling.

Symmetric matrices are diagonalized with ``numpy.linalg.eigh``; eigenpairs
are then ordered by eigenvalue, largest first, and each eigenvector is
flipped so that its largest-magnitude entry is positive.
"""
from typing import Tuple

import numpy as np
import structlog

from openlbp.core.exceptions import InvalidMatrixError, InvalidParameterError, MismatchError
from openlbp.schemas.dataset import PcaModel

logger = structlog.get_logger()

SYMMETRY_TOLERANCE = 1e-9


def sorted_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvectors as rows, sign-normalized."""
    values, vectors = np.linalg.eigh(matrix)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    rows = vectors[:, order].T.copy()
    for row in rows:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return values, rows


def _as_matrix(data: np.ndarray) -> np.ndarray:
    points = np.asarray(data, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2:
        raise MismatchError(f"expected a (samples x dim) matrix, got shape {points.shape}")
    return points


def pca_fit(data: np.ndarray) -> PcaModel:
    """Principal axes of the population covariance of ``data``."""
    points = _as_matrix(data)
    if points.shape[0] < 2:
        raise InvalidParameterError(
            f"PCA needs at least 2 samples, got {points.shape[0]}", code="too-few-samples"
        )
    mean = points.mean(axis=0)
    centered = points - mean
    covariance = centered.T @ centered / points.shape[0]
    variances, components = sorted_eigh((covariance + covariance.T) / 2.0)
    logger.debug("PCA fitted", samples=points.shape[0], dim=points.shape[1])
    return PcaModel(mean=mean, components=components, variances=np.clip(variances, 0.0, None))


def _check_components(model: PcaModel, n_components: int) -> None:
    if not 1 <= n_components <= model.n_components:
        raise InvalidParameterError(
            f"{n_components} components requested, model has {model.n_components}",
            code="too-many-components",
        )


def pca_project(model: PcaModel, data: np.ndarray, n_components: int) -> np.ndarray:
    """Coordinates of centered ``data`` on the first ``n_components`` axes."""
    _check_components(model, n_components)
    points = _as_matrix(data)
    if points.shape[1] != model.dim:
        raise MismatchError(
            f"model fitted on {model.dim} features, data has {points.shape[1]}",
            code="dimension-mismatch",
        )
    return (points - model.mean) @ model.components[:n_components].T


def pca_reconstruct(model: PcaModel, coords: np.ndarray) -> np.ndarray:
    """Map projected coordinates back into feature space."""
    points = _as_matrix(coords)
    _check_components(model, points.shape[1])
    return points @ model.components[: points.shape[1]] + model.mean


def mds_embed(distances: np.ndarray, out_dim: int) -> np.ndarray:
    """Classical scaling of a distance matrix into ``out_dim`` coordinates.

    The squared distances are double-centered into a Gram matrix whose top
    eigenpairs give the coordinates; negative eigenvalues contribute zero
    columns, as do dimensions beyond the number of points.
    """
    matrix = np.asarray(distances, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidMatrixError(f"distance matrix must be square, got shape {matrix.shape}")
    if out_dim < 1:
        raise InvalidParameterError(f"output dimension must be positive, got {out_dim}")
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
        raise InvalidParameterError("distances must be finite and nonnegative")
    if np.any(np.abs(matrix - matrix.T) > SYMMETRY_TOLERANCE):
        raise InvalidMatrixError("distance matrix is not symmetric")
    if np.any(np.abs(np.diag(matrix)) > SYMMETRY_TOLERANCE):
        raise InvalidMatrixError("distance matrix has a nonzero diagonal", code="nonzero-diagonal")

    count = matrix.shape[0]
    centering = np.eye(count) - np.full((count, count), 1.0 / count)
    gram = -0.5 * centering @ (matrix ** 2) @ centering
    values, vectors = sorted_eigh((gram + gram.T) / 2.0)

    kept = min(out_dim, count)
    scales = np.sqrt(np.clip(values[:kept], 0.0, None))
    coords = np.zeros((count, out_dim))
    coords[:, :kept] = vectors[:kept].T * scales
    logger.debug("MDS embedded", points=count, out_dim=out_dim)
    return coords
