"""
``reduce``: low-dimensional coordinates for plotting feature sets.
"""
import argparse
from typing import TextIO

from openlbp.cli.arguments import add_distance_argument, add_output_argument, positive_int
from openlbp.core.logging import run_logger
from openlbp.schemas.dataset import DistanceKind
from openlbp.services.distances import pairwise_distances
from openlbp.services.reduction import mds_embed, pca_fit, pca_project
from openlbp.utils.serialization import read_dataset_csv, write_matrix_csv

HELP = "project feature rows to a few coordinates with PCA or classical MDS"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("features", metavar="CSV", help="feature rows")
    parser.add_argument("--method", choices=["pca", "mds"], default="pca")
    parser.add_argument("--dims", type=positive_int, default=2, help="output coordinates")
    add_distance_argument(parser, DistanceKind.L2.value)
    add_output_argument(parser)


def execute(args: argparse.Namespace, out: TextIO) -> int:
    data = read_dataset_csv(args.features)
    if args.method == "pca":
        model = pca_fit(data.features)
        run_logger.log_model_fitted("pca", len(data), {"dim": model.dim})
        coords = pca_project(model, data.features, args.dims)
    else:
        coords = mds_embed(pairwise_distances(data.features, args.distance), args.dims)
    write_matrix_csv(out, coords, "c", data.labels)
    return 0
