"""
``eval``: ROC or precision-recall curve of a score file.
"""
import argparse
from typing import TextIO

from openlbp.cli.arguments import add_output_argument
from openlbp.services.evaluation import confusion_at_threshold, pr_curve, roc_curve
from openlbp.utils.serialization import read_scores_csv, write_pr_csv, write_roc_csv

HELP = "ROC (with AUC) or precision-recall points from 'score,label' rows"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scores", metavar="CSV", help="rows 'score,label' with label 0 or 1")
    parser.add_argument("--curve", choices=["roc", "pr"], default="roc")
    parser.add_argument("--threshold", type=float, help="also report confusion counts at this score")
    add_output_argument(parser)


def execute(args: argparse.Namespace, out: TextIO) -> int:
    samples = read_scores_csv(args.scores)
    if args.curve == "roc":
        write_roc_csv(out, roc_curve(samples))
    else:
        write_pr_csv(out, pr_curve(samples))
    if args.threshold is not None:
        counts = confusion_at_threshold(samples, args.threshold)
        out.write(f"# confusion,{counts.tp},{counts.fp},{counts.tn},{counts.fn}\n")
    return 0
