"""
``describe``: LBP descriptors of one or more images.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, TextIO, Tuple

from openlbp.cli.arguments import (
    add_output_argument,
    add_sampling_arguments,
    grid_shape,
    odd_window,
    positive_int,
)
from openlbp.core.config import settings
from openlbp.core.exceptions import UsageError
from openlbp.core.logging import run_logger
from openlbp.schemas.descriptor import Descriptor, SamplingSpec
from openlbp.services.histograms import grid_histogram
from openlbp.services.imaging import read_image
from openlbp.services.lbp import basic_lbp, generalized_lbp, median_robust_lbp
from openlbp.services.mappings import build_code_mapping
from openlbp.utils.serialization import (
    csv_row,
    dataset_row,
    descriptor_header,
    descriptor_row,
    format_number,
)

HELP = "compute LBP histogram descriptors of images"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("images", nargs="+", metavar="IMAGE", help="PGM/PPM files")
    add_sampling_arguments(parser)
    parser.add_argument("--grid", type=grid_shape, default=settings.default_grid, help="windows as GXxGY")
    parser.add_argument("--basic", action="store_true", help="3x3 operator; also reports mean contrast C")
    parser.add_argument("--median-window", type=odd_window, metavar="W", help="median-robust sampling")
    parser.add_argument("--label", help="emit dataset rows 'label,features...' with this label")
    parser.add_argument("--workers", type=positive_int, default=settings.MAX_WORKERS, help="parallel images")
    add_output_argument(parser)


def _describe_one(path: str, args: argparse.Namespace) -> Tuple[Descriptor, Optional[float]]:
    image = read_image(path)
    mapping = build_code_mapping(args.mapping, args.p)
    mean_contrast = None
    if args.basic:
        codes, stats = basic_lbp(image)
        mean_contrast = stats.mean_contrast
    elif args.median_window is not None:
        codes = median_robust_lbp(image, SamplingSpec(P=args.p, R=args.r), args.median_window)
    else:
        codes = generalized_lbp(image, SamplingSpec(P=args.p, R=args.r))
    descriptor = grid_histogram(codes, mapping, args.grid, args.normalize).with_source(path)
    run_logger.log_descriptor_extracted(
        path, descriptor.operator, descriptor.values.size, {"grid": list(args.grid)}
    )
    return descriptor, mean_contrast


def execute(args: argparse.Namespace, out: TextIO) -> int:
    if args.basic and args.median_window is not None:
        raise UsageError("--basic and --median-window are mutually exclusive")
    if args.basic and args.p != 8:
        raise UsageError("--basic always samples P=8 neighbours")
    if args.basic and args.r != 1.0:
        raise UsageError("--basic always samples the 3x3 neighbourhood (R=1)")

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(lambda path: _describe_one(path, args), args.images))

    length = results[0][0].values.size
    if args.label is not None:
        out.write(csv_row(["label"] + [f"f{i}" for i in range(length)]))
        for descriptor, _ in results:
            out.write(dataset_row(args.label, descriptor.values))
    else:
        out.write(descriptor_header(length))
        for descriptor, _ in results:
            out.write(descriptor_row(descriptor))
    for descriptor, mean_contrast in results:
        if mean_contrast is not None:
            out.write(f"# mean_c,{descriptor.source},{format_number(mean_contrast)}\n")
    return 0
