"""
LBP sampling, mapping, code image and descriptor schemas.
"""
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from openlbp.schemas.base import ArrayModel, frozen_array

MAX_TABLE_P = 16


class MappingKind(str, Enum):
    """Code-to-bin mapping families."""
    FULL = "full"
    U2 = "u2"
    RI = "ri"
    RIU2 = "riu2"


class SamplingSpec(BaseModel):
    """Circular sampling geometry: ``P`` samples at radius ``R``."""

    model_config = ConfigDict(frozen=True)

    P: int = Field(8, ge=4, le=24)
    R: float = Field(1.0, gt=0)

    @property
    def margin(self) -> int:
        return int(math.ceil(self.R))


class CodeMapping(ArrayModel):
    """Lookup from ``P``-bit codes to contiguous histogram bins.

    ``table`` is materialized for ``P <= 16`` only; larger ``P`` is mapped on
    the fly (see ``openlbp.services.mappings.map_codes``).
    """

    kind: MappingKind
    P: int = Field(..., ge=4, le=24)
    table: Optional[np.ndarray] = None
    bin_count: int = Field(..., ge=1)

    @field_validator("table", mode="before")
    @classmethod
    def _freeze_table(cls, value: object) -> Optional[np.ndarray]:
        return None if value is None else frozen_array(value, dtype=np.int64)

    @model_validator(mode="after")
    def _check_table(self) -> "CodeMapping":
        if self.table is None:
            if self.P <= MAX_TABLE_P:
                raise ValueError(f"P={self.P} mappings must carry a table")
            return self
        if self.table.shape != (1 << self.P,):
            raise ValueError(f"table length must be 2^{self.P}")
        if self.table.min() < 0 or self.table.max() >= self.bin_count:
            raise ValueError("table entries must lie in [0, bin_count)")
        if np.unique(self.table).size != self.bin_count:
            raise ValueError("bins must form a contiguous range 0..bin_count-1")
        return self


class CodeImage(ArrayModel):
    """Per-pixel codes for the interior of a ``width`` x ``height`` source."""

    width: int = Field(..., ge=1)
    height: int = Field(..., ge=1)
    margin: int = Field(..., ge=0)
    spec: SamplingSpec
    operator: str = "generalized"
    codes: np.ndarray

    @field_validator("codes", mode="before")
    @classmethod
    def _freeze_codes(cls, value: object) -> np.ndarray:
        return frozen_array(value, dtype=np.int64)

    @model_validator(mode="after")
    def _check_codes(self) -> "CodeImage":
        expected = (self.height - 2 * self.margin, self.width - 2 * self.margin)
        if expected[0] < 1 or expected[1] < 1:
            raise ValueError("interior region is empty")
        if self.codes.shape != expected:
            raise ValueError(f"codes shape {self.codes.shape} != interior {expected}")
        if self.codes.size and (self.codes.min() < 0 or self.codes.max() >= (1 << self.P)):
            raise ValueError(f"codes must lie in [0, 2^{self.P})")
        return self

    @property
    def P(self) -> int:
        return self.spec.P

    @property
    def interior_shape(self) -> Tuple[int, int]:
        return int(self.codes.shape[0]), int(self.codes.shape[1])


class Descriptor(ArrayModel):
    """Histogram vector (possibly per-window and per-plane) with provenance."""

    values: np.ndarray
    bins_per_window: int = Field(..., ge=1)
    grid: Tuple[int, int] = (1, 1)
    normalized: bool = False
    spec: SamplingSpec
    mapping_kind: MappingKind
    planes: int = Field(1, ge=1, le=3)
    operator: str = "generalized"
    source: Optional[str] = None

    @field_validator("values", mode="before")
    @classmethod
    def _freeze_values(cls, value: object) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_length(self) -> "Descriptor":
        gx, gy = self.grid
        if gx < 1 or gy < 1:
            raise ValueError("grid counts must be positive")
        expected = gx * gy * self.bins_per_window * self.planes
        if self.values.shape != (expected,):
            raise ValueError(f"descriptor length {self.values.size} != {expected}")
        if np.any(self.values < 0):
            raise ValueError("histogram values must be nonnegative")
        return self

    @property
    def window_count(self) -> int:
        return self.grid[0] * self.grid[1] * self.planes

    def window(self, index: int) -> np.ndarray:
        """Sub-vector of one window (plane-major for LBP-TOP)."""
        start = index * self.bins_per_window
        return self.values[start:start + self.bins_per_window]

    def with_source(self, source: str) -> "Descriptor":
        return self.model_copy(update={"source": source})


class TexturePixelStats(BaseModel):
    """Contrast and variance measured at one pixel."""

    model_config = ConfigDict(frozen=True)

    contrast_c: float
    var: float = Field(..., ge=0)


class TextureStatsMap(ArrayModel):
    """Per-pixel contrast ``C`` and ``VAR`` over a code image's interior."""

    contrast: np.ndarray
    var: np.ndarray

    @field_validator("contrast", "var", mode="before")
    @classmethod
    def _freeze(cls, value: object) -> np.ndarray:
        return frozen_array(value)

    def at(self, row: int, col: int) -> TexturePixelStats:
        return TexturePixelStats(
            contrast_c=float(self.contrast[row, col]),
            var=max(float(self.var[row, col]), 0.0),
        )

    @property
    def mean_contrast(self) -> float:
        return float(self.contrast.mean())
