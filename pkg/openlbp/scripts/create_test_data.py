"""
Create synthetic texture fixtures: stripes in two orientations, checkerboards
and white noise, each patch with random phase and brightness/contrast jitter.

    python -m openlbp.scripts.create_test_data OUTPUT_DIR --per-class 10
"""
import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from openlbp.core.logging import setup_logging
from openlbp.schemas.image import GrayImage, VideoVolume
from openlbp.services.imaging import write_pgm

logger = structlog.get_logger()

MID_GRAY = 128.0
AMPLITUDE = 90.0
NOISE_SIGMA = 3.0

FAMILIES = ("horizontal", "vertical", "checkerboard", "noise")


def stripes(size: int, rng: np.random.Generator, vertical: bool, period: float = 8.0) -> np.ndarray:
    """Sinusoidal stripes with random phase; intensity varies across rows (or columns)."""
    axis = np.arange(size, dtype=np.float64)
    wave = MID_GRAY + AMPLITUDE * np.sin(2.0 * np.pi * axis / period + rng.uniform(0, 2 * np.pi))
    pattern = np.tile(wave, (size, 1)) if vertical else np.tile(wave[:, None], (1, size))
    return pattern + rng.normal(0.0, NOISE_SIGMA, (size, size))


def checkerboard(size: int, rng: np.random.Generator, cell: int = 4) -> np.ndarray:
    offset_y, offset_x = rng.integers(0, 2 * cell, size=2)
    rows = (np.arange(size) + offset_y) // cell
    cols = (np.arange(size) + offset_x) // cell
    board = ((rows[:, None] + cols[None, :]) % 2).astype(np.float64)
    pattern = MID_GRAY + AMPLITUDE * (2.0 * board - 1.0)
    return pattern + rng.normal(0.0, NOISE_SIGMA, (size, size))


def white_noise(size: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, 255.0, (size, size))


GENERATORS: Dict[str, Callable[[int, np.random.Generator], np.ndarray]] = {
    "horizontal": lambda size, rng: stripes(size, rng, vertical=False),
    "vertical": lambda size, rng: stripes(size, rng, vertical=True),
    "checkerboard": checkerboard,
    "noise": white_noise,
}


def jitter(
    pixels: np.ndarray,
    rng: np.random.Generator,
    contrast: Tuple[float, float] = (0.4, 1.0),
    brightness: Tuple[float, float] = (-40.0, 40.0),
) -> np.ndarray:
    """Random gain around mid-gray plus offset, clipped to [0, 255]."""
    gain = rng.uniform(*contrast)
    offset = rng.uniform(*brightness)
    return np.clip(gain * (pixels - MID_GRAY) + MID_GRAY + offset, 0.0, 255.0)


def texture_patch(
    family: str, size: int, rng: np.random.Generator, jittered: bool = True
) -> GrayImage:
    if family not in GENERATORS:
        raise ValueError(f"unknown texture family {family!r}; choose from {FAMILIES}")
    pixels = np.clip(GENERATORS[family](size, rng), 0.0, 255.0)
    if jittered:
        pixels = jitter(pixels, rng)
    return GrayImage(pixels=pixels)


def make_texture_set(
    families: Sequence[str] = FAMILIES,
    per_class: int = 40,
    size: int = 64,
    seed: int = 0,
    jittered: bool = True,
) -> List[Tuple[str, GrayImage]]:
    """``per_class`` patches of every family, interleaved family by family."""
    rng = np.random.default_rng(seed)
    return [
        (family, texture_patch(family, size, rng, jittered))
        for _ in range(per_class)
        for family in families
    ]


def drifting_stripes(frames: int, size: int, speed: float = 1.0, seed: int = 0) -> VideoVolume:
    """Vertical stripes translating ``speed`` pixels per frame."""
    rng = np.random.default_rng(seed)
    columns = np.arange(size, dtype=np.float64)
    phase = rng.uniform(0, 2 * np.pi)
    volume = [
        np.tile(MID_GRAY + AMPLITUDE * np.sin(2 * np.pi * (columns - speed * t) / 8.0 + phase), (size, 1))
        for t in range(frames)
    ]
    return VideoVolume.from_array(np.array(volume))


def write_fixtures(output: Path, per_class: int, size: int, seed: int) -> List[Path]:
    """Write texture PGMs as ``<family>_<index>.pgm`` and one frame directory."""
    output.mkdir(parents=True, exist_ok=True)
    written = []
    counters: Dict[str, int] = {}
    for family, image in make_texture_set(per_class=per_class, size=size, seed=seed):
        index = counters.get(family, 0)
        counters[family] = index + 1
        path = output / f"{family}_{index:03d}.pgm"
        write_pgm(path, GrayImage(pixels=np.floor(image.pixels + 0.5)))
        written.append(path)

    frames_dir = output / "frames"
    frames_dir.mkdir(exist_ok=True)
    for t, frame in enumerate(drifting_stripes(frames=8, size=size, seed=seed).frames):
        path = frames_dir / f"frame_{t:03d}.pgm"
        write_pgm(path, GrayImage(pixels=np.floor(frame.pixels + 0.5)))
        written.append(path)
    logger.info("Fixtures written", directory=str(output), files=len(written))
    return written


def main(argv: Optional[Sequence[str]] = None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("output", type=Path)
    parser.add_argument("--per-class", type=int, default=10)
    parser.add_argument("--size", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    setup_logging()
    write_fixtures(args.output, args.per_class, args.size, args.seed)


if __name__ == "__main__":
    main()
