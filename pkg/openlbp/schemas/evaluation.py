"""
Evaluation schemas: scored samples, confusion counts, ROC and PR curves.
"""
import math
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ScoredSample(BaseModel):
    """Classifier score (higher means more positive) with ground truth."""

    model_config = ConfigDict(frozen=True)

    score: float
    label: bool

    @field_validator("score")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("score must be finite")
        return value


class ConfusionCounts(BaseModel):
    """Two-class confusion counts at one decision threshold."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp

    @property
    def total(self) -> int:
        return self.positives + self.negatives

    @property
    def precision(self) -> float:
        predicted = self.tp + self.fp
        return self.tp / predicted if predicted else 0.0

    @property
    def recall(self) -> float:
        return self.tp / self.positives if self.positives else 0.0

    @property
    def fpr(self) -> float:
        return self.fp / self.negatives if self.negatives else 0.0

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else 0.0

    @property
    def f1(self) -> float:
        denominator = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / denominator if denominator else 0.0


class RocCurve(BaseModel):
    """(fpr, tpr) points from (0, 0) to (1, 1) and the area under them."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[Tuple[float, float], ...]
    thresholds: Tuple[float, ...] = ()
    auc: float = Field(..., ge=0, le=1)


class PrCurve(BaseModel):
    """(recall, precision) points, one per distinct threshold."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[Tuple[float, float], ...]
    thresholds: Tuple[float, ...] = ()
