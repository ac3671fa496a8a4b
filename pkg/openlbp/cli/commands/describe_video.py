"""
``describe-video``: LBP-TOP descriptors of frame directories.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, TextIO

from openlbp.cli.arguments import add_output_argument, add_sampling_arguments, positive_float, positive_int
from openlbp.core.config import settings
from openlbp.core.logging import run_logger
from openlbp.schemas.descriptor import Descriptor, SamplingSpec
from openlbp.services.histograms import lbp_top
from openlbp.services.imaging import load_frames
from openlbp.services.mappings import build_code_mapping
from openlbp.utils.serialization import write_descriptors_csv

HELP = "compute LBP-TOP descriptors of frame directories (frames in filename order)"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("directories", nargs="+", metavar="DIR", help="directories of PGM/PPM frames")
    add_sampling_arguments(parser)
    parser.add_argument(
        "--rt", type=positive_float, help="temporal radius of the XT and YT planes (default: --r)"
    )
    parser.add_argument("--workers", type=positive_int, default=settings.MAX_WORKERS, help="parallel volumes")
    add_output_argument(parser)


def _describe_volume(directory: str, args: argparse.Namespace, temporal: Optional[float]) -> Descriptor:
    volume = load_frames(directory)
    spatial = SamplingSpec(P=args.p, R=args.r)
    planar = SamplingSpec(P=args.p, R=temporal if temporal is not None else args.r)
    mapping = build_code_mapping(args.mapping, args.p)
    descriptor = lbp_top(volume, spatial, planar, planar, mapping, args.normalize).with_source(directory)
    run_logger.log_descriptor_extracted(
        directory, descriptor.operator, descriptor.values.size, {"frames": volume.frame_count}
    )
    return descriptor


def execute(args: argparse.Namespace, out: TextIO) -> int:
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        descriptors = list(
            pool.map(lambda directory: _describe_volume(directory, args, args.rt), args.directories)
        )
    write_descriptors_csv(out, descriptors)
    return 0
