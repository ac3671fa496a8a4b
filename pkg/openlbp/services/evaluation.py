"""
Two-class evaluation: confusion counts, ROC with AUC and precision-recall.

A sample is predicted positive when its score is at or above the threshold.
Curves sweep one threshold per distinct score, highest first, so tied
samples change side together.
"""
from typing import Dict, List, Sequence, Tuple

import numpy as np

from openlbp.core.exceptions import InsufficientDataError, MismatchError
from openlbp.schemas.evaluation import ConfusionCounts, PrCurve, RocCurve, ScoredSample


def scored_samples(scores: Sequence[float], labels: Sequence[bool]) -> List[ScoredSample]:
    if len(scores) != len(labels):
        raise MismatchError(
            f"{len(scores)} scores for {len(labels)} labels", code="length-mismatch"
        )
    return [ScoredSample(score=float(s), label=bool(l)) for s, l in zip(scores, labels)]


def _class_totals(samples: Sequence[ScoredSample]) -> Tuple[int, int]:
    positives = sum(1 for sample in samples if sample.label)
    return positives, len(samples) - positives


def _require_both_classes(samples: Sequence[ScoredSample]) -> Tuple[int, int]:
    positives, negatives = _class_totals(samples)
    if positives == 0 or negatives == 0:
        raise InsufficientDataError(
            f"need positive and negative samples, got {positives} and {negatives}",
            code="degenerate-class-distribution",
        )
    return positives, negatives


def confusion_at_threshold(samples: Sequence[ScoredSample], threshold: float) -> ConfusionCounts:
    _require_both_classes(samples)
    tp = fp = tn = fn = 0
    for sample in samples:
        predicted = sample.score >= threshold
        if sample.label:
            tp, fn = (tp + 1, fn) if predicted else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if predicted else (fp, tn + 1)
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _sweep(samples: Sequence[ScoredSample]) -> List[Tuple[float, int, int]]:
    """``(threshold, tp, fp)`` after admitting each distinct score, highest first."""
    scores = np.array([sample.score for sample in samples], dtype=np.float64)
    labels = np.array([sample.label for sample in samples], dtype=bool)
    thresholds, inverse = np.unique(-scores, return_inverse=True)
    inverse = inverse.ravel()
    tp_steps = np.bincount(inverse, weights=labels, minlength=thresholds.size)
    fp_steps = np.bincount(inverse, weights=~labels, minlength=thresholds.size)
    tps = np.cumsum(tp_steps.astype(np.int64))
    fps = np.cumsum(fp_steps.astype(np.int64))
    return [(float(-t), int(tp), int(fp)) for t, tp, fp in zip(thresholds, tps, fps)]


def roc_curve(samples: Sequence[ScoredSample]) -> RocCurve:
    """ROC points from (0, 0) to (1, 1) and their trapezoidal area.

    ``thresholds[i]`` produced ``points[i + 1]``; the origin has no threshold.
    """
    positives, negatives = _require_both_classes(samples)
    points = [(0.0, 0.0)]
    thresholds = []
    doubled_area = 0
    previous_tp = previous_fp = 0
    for threshold, tp, fp in _sweep(samples):
        doubled_area += (fp - previous_fp) * (tp + previous_tp)
        points.append((fp / negatives, tp / positives))
        thresholds.append(threshold)
        previous_tp, previous_fp = tp, fp
    return RocCurve(
        points=tuple(points),
        thresholds=tuple(thresholds),
        auc=doubled_area / (2 * positives * negatives),
    )


def pr_curve(samples: Sequence[ScoredSample]) -> PrCurve:
    """One (recall, precision) point per distinct threshold, highest threshold first.

    The last point predicts everything positive: recall 1, precision equal to
    the prevalence.
    """
    positives, _ = _class_totals(samples)
    if positives == 0:
        raise InsufficientDataError("precision-recall needs a positive sample", code="no-positive-samples")
    points = []
    thresholds = []
    for threshold, tp, fp in _sweep(samples):
        points.append((tp / positives, tp / (tp + fp)))
        thresholds.append(threshold)
    return PrCurve(points=tuple(points), thresholds=tuple(thresholds))


def auc_mann_whitney(samples: Sequence[ScoredSample]) -> float:
    """Fraction of positive/negative pairs ranked correctly, ties counting one half."""
    positives, negatives = _require_both_classes(samples)
    scores = np.array([sample.score for sample in samples], dtype=np.float64)
    labels = np.array([sample.label for sample in samples], dtype=bool)
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    inverse = inverse.ravel()
    # doubled average rank of each tie group: 2 * (start + (count + 1) / 2)
    starts = np.cumsum(counts) - counts
    doubled_ranks = 2 * starts + counts + 1
    doubled_sum = int(doubled_ranks[inverse][labels].sum())
    concordant_doubled = doubled_sum - positives * (positives + 1)
    return concordant_doubled / (2 * positives * negatives)


def one_vs_rest_confusion(
    truth: Sequence[str], predicted: Sequence[str]
) -> Dict[str, ConfusionCounts]:
    """Per-label counts treating that label as the positive class."""
    if len(truth) != len(predicted):
        raise MismatchError(
            f"{len(truth)} true labels for {len(predicted)} predictions", code="length-mismatch"
        )
    result = {}
    for label in sorted(set(truth) | set(predicted)):
        tp = sum(1 for t, p in zip(truth, predicted) if t == label and p == label)
        fp = sum(1 for t, p in zip(truth, predicted) if t != label and p == label)
        fn = sum(1 for t, p in zip(truth, predicted) if t == label and p != label)
        result[label] = ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=len(truth) - tp - fp - fn)
    return result
