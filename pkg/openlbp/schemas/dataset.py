"""
Dataset and fitted-model schemas for the learning layer.
"""
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from openlbp.schemas.base import ArrayModel, frozen_array


class DistanceKind(str, Enum):
    """Histogram (dis)similarity measures."""
    CHI_SQUARE = "chi-square"
    L1 = "L1"
    L2 = "L2"
    INTERSECTION = "histogram-intersection"


class LabeledDataset(ArrayModel):
    """Feature vectors ``(n, dim)`` with one opaque string label each."""

    features: np.ndarray
    labels: Tuple[str, ...]

    @field_validator("features", mode="before")
    @classmethod
    def _check_features(cls, value: object) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 2:
            raise ValueError(f"features must be 2-D (samples x dim), got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("features must be finite")
        return array

    @model_validator(mode="after")
    def _check_labels(self) -> "LabeledDataset":
        if len(self.labels) != self.features.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {self.features.shape[0]} feature vectors"
            )
        return self

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[float]], labels: Sequence[str], dim: Optional[int] = None
    ) -> "LabeledDataset":
        if not rows:
            return cls(features=np.zeros((0, dim or 0)), labels=())
        return cls(features=np.asarray(rows, dtype=np.float64), labels=tuple(labels))

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    def __len__(self) -> int:
        return int(self.features.shape[0])

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        index = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            features=self.features[index].reshape(len(index), self.dim),
            labels=tuple(self.labels[i] for i in index),
        )

    def with_features(self, features: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(features=features, labels=self.labels)


class SplitResult(BaseModel):
    """Train / validation / test partition of one dataset."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    train: LabeledDataset
    validation: LabeledDataset
    test: LabeledDataset
    seed: int

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)


class Normalizer(ArrayModel):
    """Per-feature standardization fitted on a training partition."""

    means: np.ndarray
    scales: np.ndarray

    @field_validator("means", "scales", mode="before")
    @classmethod
    def _freeze(cls, value: object) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check(self) -> "Normalizer":
        if self.means.ndim != 1 or self.means.shape != self.scales.shape:
            raise ValueError("means and scales must be vectors of equal length")
        if np.any(self.scales <= 0):
            raise ValueError("all scales must be positive")
        return self

    @property
    def dim(self) -> int:
        return int(self.means.shape[0])


class KnnConfig(BaseModel):
    """Neighbour count and distance for k-nearest-neighbour voting."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(1, ge=1)
    distance_kind: DistanceKind = DistanceKind.CHI_SQUARE


class KnnResult(BaseModel):
    """Predicted label with the neighbours that voted for it."""

    model_config = ConfigDict(frozen=True)

    label: str
    neighbors: Tuple[int, ...]
    distances: Tuple[float, ...]


class ClassModelSet(ArrayModel):
    """One mean histogram per label for 1:n nearest-model matching."""

    labels: Tuple[str, ...]
    models: np.ndarray

    @field_validator("models", mode="before")
    @classmethod
    def _freeze(cls, value: object) -> np.ndarray:
        return frozen_array(value)


class KMeansModel(ArrayModel):
    """Result of a k-means fit."""

    k: int = Field(..., ge=1)
    centroids: np.ndarray
    assignments: np.ndarray
    iterations: int = Field(..., ge=0)
    sse: float = Field(..., ge=0)
    sse_history: Tuple[float, ...] = ()
    converged: bool = False

    @field_validator("centroids", mode="before")
    @classmethod
    def _freeze_centroids(cls, value: object) -> np.ndarray:
        return frozen_array(value)

    @field_validator("assignments", mode="before")
    @classmethod
    def _freeze_assignments(cls, value: object) -> np.ndarray:
        return frozen_array(value, dtype=np.int64)

    @model_validator(mode="after")
    def _check(self) -> "KMeansModel":
        if self.centroids.ndim != 2 or self.centroids.shape[0] != self.k:
            raise ValueError("centroids must be a (k, dim) matrix")
        if self.assignments.size and (
            self.assignments.min() < 0 or self.assignments.max() >= self.k
        ):
            raise ValueError("assignments must lie in [0, k)")
        return self

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Index of the nearest centroid for each row (ties to the lower index)."""
        points = np.atleast_2d(np.asarray(features, dtype=np.float64))
        squared = ((points[:, None, :] - self.centroids[None, :, :]) ** 2).sum(axis=2)
        return np.argmin(squared, axis=1)


class PcaModel(ArrayModel):
    """Principal axes sorted by explained variance, largest first."""

    mean: np.ndarray
    components: np.ndarray
    variances: np.ndarray

    @field_validator("mean", "components", "variances", mode="before")
    @classmethod
    def _freeze(cls, value: object) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check(self) -> "PcaModel":
        dim = self.mean.shape[0]
        if self.components.shape[1:] != (dim,):
            raise ValueError("components must be rows of the feature dimension")
        if self.variances.shape != (self.components.shape[0],):
            raise ValueError("one variance per component")
        return self

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @property
    def n_components(self) -> int:
        return int(self.components.shape[0])
