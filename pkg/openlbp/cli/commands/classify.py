"""
``classify``: k-nearest-neighbour labels for query descriptors.
"""
import argparse
from typing import TextIO

from openlbp.cli.arguments import add_distance_argument, add_output_argument, positive_int
from openlbp.core.config import settings
from openlbp.core.logging import run_logger
from openlbp.schemas.dataset import KnnConfig
from openlbp.services.evaluation import one_vs_rest_confusion
from openlbp.services.learning import apply_normalizer, fit_normalizer, knn_classify
from openlbp.utils.serialization import csv_row, format_number, read_dataset_csv

HELP = "label query rows by k-nearest-neighbour vote over a training set"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--train", required=True, metavar="CSV", help="labelled training rows")
    parser.add_argument("--query", required=True, metavar="CSV", help="rows to classify")
    parser.add_argument("--k", type=positive_int, default=settings.DEFAULT_K, help="neighbours")
    add_distance_argument(parser, settings.DEFAULT_DISTANCE)
    parser.add_argument("--normalize", action="store_true", help="standardize with training statistics")
    parser.add_argument(
        "--labels", action="store_true", help="query label column is ground truth; report accuracy"
    )
    add_output_argument(parser)


def execute(args: argparse.Namespace, out: TextIO) -> int:
    train = read_dataset_csv(args.train)
    query = read_dataset_csv(args.query)
    if args.normalize:
        normalizer = fit_normalizer(train)
        run_logger.log_model_fitted("normalizer", len(train))
        train, query = apply_normalizer(normalizer, train), apply_normalizer(normalizer, query)

    config = KnnConfig(k=args.k, distance_kind=args.distance)
    predicted = [knn_classify(train, config, row).label for row in query.features]

    out.write("row,given,predicted\n")
    for index, (given, label) in enumerate(zip(query.labels, predicted)):
        out.write(csv_row([index, given, label]))

    if args.labels and predicted:
        correct = sum(1 for truth, label in zip(query.labels, predicted) if truth == label)
        out.write(f"# accuracy={format_number(correct / len(predicted))}\n")
        for label, counts in one_vs_rest_confusion(query.labels, predicted).items():
            out.write(f"# confusion,{label},{counts.tp},{counts.fp},{counts.tn},{counts.fn}\n")
    return 0
