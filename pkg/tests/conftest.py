"""
Shared fixtures for the Open LBP test suite.
"""
from pathlib import Path

import numpy as np
import pytest

from openlbp.schemas.image import GrayImage
from openlbp.services.golden import textbook_image
from openlbp.services.imaging import write_pgm


@pytest.fixture
def textbook_patch() -> GrayImage:
    """3x3 patch (6 5 2 / 7 6 1 / 9 8 7) with code 241."""
    return textbook_image()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def corner_image() -> GrayImage:
    return GrayImage(pixels=[[0.0, 10.0], [20.0, 30.0]])


@pytest.fixture
def write_image(tmp_path: Path):
    """Write a pixel array as PGM under ``tmp_path`` and return its path."""

    def _write(name: str, pixels) -> Path:
        path = tmp_path / name
        write_pgm(path, GrayImage(pixels=np.asarray(pixels, dtype=np.float64)))
        return path

    return _write


@pytest.fixture
def write_text(tmp_path: Path):
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
