"""
``cluster``: k-means over feature rows, then optional cluster labelling.
"""
import argparse
from typing import TextIO

from openlbp.cli.arguments import add_output_argument, positive_int
from openlbp.core.config import settings
from openlbp.core.logging import run_logger
from openlbp.services.learning import cluster_purity, kmeans_best_of, label_clusters
from openlbp.utils.serialization import csv_row, format_number, read_dataset_csv, save_model

HELP = "group feature rows with k-means (best SSE over restarts)"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("features", metavar="CSV", help="feature rows (label column may be empty)")
    parser.add_argument("--k", type=positive_int, required=True, help="number of clusters")
    parser.add_argument("--seed", type=int, default=0, help="seed of the first restart")
    parser.add_argument("--restarts", type=positive_int, default=1, help="seeds seed..seed+N-1")
    parser.add_argument(
        "--max-iter", type=positive_int, default=settings.KMEANS_MAX_ITER, help="iteration cap"
    )
    parser.add_argument("--centroids", metavar="PATH", help="write the fitted model as JSON")
    add_output_argument(parser)


def execute(args: argparse.Namespace, out: TextIO) -> int:
    data = read_dataset_csv(args.features)
    seeds = [args.seed + offset for offset in range(args.restarts)]
    model = kmeans_best_of(data.features, args.k, seeds, args.max_iter)
    run_logger.log_model_fitted(
        "kmeans", len(data), {"k": args.k, "sse": model.sse, "iterations": model.iterations}
    )
    if args.centroids:
        save_model(args.centroids, model)

    out.write("row,label,cluster\n")
    for index, (label, cluster) in enumerate(zip(data.labels, model.assignments)):
        out.write(csv_row([index, label, int(cluster)]))
    out.write(f"# sse={format_number(model.sse)}\n")
    if any(data.labels):
        for cluster, (majority, size) in enumerate(label_clusters(model, data.labels)):
            out.write(f"# cluster,{cluster},{majority},{size}\n")
        out.write(f"# purity={format_number(cluster_purity(model, data.labels))}\n")
    return 0
