"""
Shared argument types and flag groups for the subcommands.
"""
import argparse
from typing import Tuple

from openlbp.core.config import settings
from openlbp.schemas.dataset import DistanceKind
from openlbp.schemas.descriptor import MappingKind
from openlbp.services.mappings import MAX_P, MIN_P


def sample_count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not MIN_P <= value <= MAX_P:
        raise argparse.ArgumentTypeError(f"P must lie in [{MIN_P}, {MAX_P}], got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def odd_window(text: str) -> int:
    value = positive_int(text)
    if value % 2 == 0:
        raise argparse.ArgumentTypeError(f"window side must be odd, got {value}")
    return value


def grid_shape(text: str) -> Tuple[int, int]:
    """Parse ``GXxGY`` such as ``4x3``."""
    gx, sep, gy = text.lower().partition("x")
    if not sep:
        raise argparse.ArgumentTypeError(f"grid must look like GXxGY, got {text!r}")
    return positive_int(gx), positive_int(gy)


def add_sampling_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=sample_count, default=settings.DEFAULT_P, help="samples per ring")
    parser.add_argument("--r", type=positive_float, default=settings.DEFAULT_R, help="ring radius in pixels")
    parser.add_argument(
        "--mapping",
        choices=[kind.value for kind in MappingKind],
        default=settings.DEFAULT_MAPPING,
        help="code-to-bin mapping",
    )
    parser.add_argument("--normalize", action="store_true", help="divide each histogram by its pixel count")


def add_distance_argument(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument(
        "--distance",
        choices=[kind.value for kind in DistanceKind],
        default=default,
        help="histogram distance",
    )


def add_output_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", metavar="PATH", help="write results here instead of stdout")
