"""
Image and video containers.
"""
from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from openlbp.schemas.base import ArrayModel, frozen_array


class RasterFormat(str, Enum):
    """Supported netpbm flavours."""
    PGM_ASCII = "P2"
    PGM_BINARY = "P5"
    PPM_BINARY = "P6"


class RasterHeader(BaseModel):
    """Parsed PGM/PPM header."""

    model_config = ConfigDict(frozen=True)

    format: RasterFormat
    width: int = Field(..., ge=1)
    height: int = Field(..., ge=1)
    max_value: int = Field(255, ge=255, le=255)
    data_offset: int = Field(..., ge=0, description="Byte offset of the pixel payload")

    @property
    def channels(self) -> int:
        return 3 if self.format == RasterFormat.PPM_BINARY else 1


class GrayImage(ArrayModel):
    """Real-valued intensity raster stored as a ``(height, width)`` array.

    Intensities are conventionally 0-255 after loading; processing may
    produce any finite value, which is only rejected when saving.
    """

    pixels: np.ndarray

    @field_validator("pixels", mode="before")
    @classmethod
    def _check_pixels(cls, value: object) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 2:
            raise ValueError(f"pixels must be 2-D, got shape {array.shape}")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.all(np.isfinite(array)):
            raise ValueError("all intensities must be finite")
        return array

    @classmethod
    def from_flat(cls, width: int, height: int, pixels: Sequence[float]) -> "GrayImage":
        """Build from a row-major sequence of ``width * height`` values."""
        flat = np.asarray(pixels, dtype=np.float64)
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} intensities for {width}x{height}, got {flat.size}"
            )
        return cls(pixels=flat.reshape(height, width))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width


class VideoVolume(BaseModel):
    """Ordered stack of equally sized frames."""

    model_config = ConfigDict(frozen=True)

    frames: Tuple[GrayImage, ...]

    @model_validator(mode="after")
    def _check_frames(self) -> "VideoVolume":
        if not self.frames:
            raise ValueError("a video volume needs at least one frame")
        shape = self.frames[0].shape
        for index, frame in enumerate(self.frames):
            if frame.shape != shape:
                raise ValueError(
                    f"frame {index} is {frame.width}x{frame.height}, "
                    f"expected {shape[1]}x{shape[0]}"
                )
        return self

    @classmethod
    def from_array(cls, volume: np.ndarray) -> "VideoVolume":
        """Build from a ``(frames, height, width)`` array."""
        volume = np.asarray(volume, dtype=np.float64)
        if volume.ndim != 3:
            raise ValueError(f"volume must be 3-D, got shape {volume.shape}")
        return cls(frames=tuple(GrayImage(pixels=frame) for frame in volume))

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def as_array(self) -> np.ndarray:
        """Stack frames into a ``(frames, height, width)`` array."""
        return np.stack([frame.pixels for frame in self.frames])
