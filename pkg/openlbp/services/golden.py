"""
Built-in golden-value checks run by ``openlbp selftest``.

Each check recomputes a published or hand-derived value through the public
API and compares it with the expected number.
"""
import math
from typing import Callable, List, Tuple

import numpy as np
import structlog

from openlbp.core.exceptions import OpenLBPError
from openlbp.schemas.cli import CheckResult
from openlbp.schemas.dataset import DistanceKind, KnnConfig, LabeledDataset
from openlbp.schemas.descriptor import MappingKind, SamplingSpec
from openlbp.schemas.image import GrayImage
from openlbp.services.distances import histogram_distance
from openlbp.services.evaluation import auc_mann_whitney, pr_curve, roc_curve, scored_samples
from openlbp.services.histograms import lbp_histogram
from openlbp.services.imaging import bilinear_sample, load_image, median_of
from openlbp.services.lbp import basic_lbp, generalized_lbp, median_robust_lbp, var_measure
from openlbp.services.learning import kmeans_fit, knn_classify, split_dataset
from openlbp.services.mappings import build_code_mapping, uniform_codes
from openlbp.services.reduction import pca_fit

logger = structlog.get_logger()

# 3x3 gray levels whose LBP code is 241 with contrast (6+7+9+8+7)/5 - (5+2+1)/3
TEXTBOOK_PATCH = ((6, 5, 2), (7, 6, 1), (9, 8, 7))
TEXTBOOK_CODE = 241
TEXTBOOK_CONTRAST = 71.0 / 15.0

Outcome = Tuple[bool, str]


def textbook_image() -> GrayImage:
    return GrayImage(pixels=np.array(TEXTBOOK_PATCH, dtype=np.float64))


def _basic_code_and_contrast() -> Outcome:
    codes, stats = basic_lbp(textbook_image())
    code = int(codes.codes[0, 0])
    contrast = stats.at(0, 0).contrast_c
    ok = code == TEXTBOOK_CODE and abs(contrast - TEXTBOOK_CONTRAST) <= 1e-3
    return ok, f"code={code} C={contrast:.5f}"


def _basic_histogram_one_hot() -> Outcome:
    codes, _ = basic_lbp(textbook_image())
    values = lbp_histogram(codes, build_code_mapping(MappingKind.FULL, 8), False).values
    hot = np.flatnonzero(values)
    return hot.tolist() == [TEXTBOOK_CODE] and values[TEXTBOOK_CODE] == 1, f"nonzero bins={hot.tolist()}"


def _constant_patch() -> Outcome:
    codes, stats = basic_lbp(GrayImage(pixels=np.full((3, 3), 50.0)))
    code, contrast = int(codes.codes[0, 0]), stats.at(0, 0).contrast_c
    return code == 255 and contrast == 0.0, f"code={code} C={contrast}"


def _full_lengths() -> Outcome:
    p8 = build_code_mapping(MappingKind.FULL, 8).bin_count
    p16 = build_code_mapping(MappingKind.FULL, 16).bin_count
    return p8 == 256 and p16 == 65536, f"P=8 -> {p8}, P=16 -> {p16}"


def _mapping_sizes() -> Outcome:
    uniform = int(uniform_codes(8).size)
    sizes = {kind.value: build_code_mapping(kind, 8).bin_count for kind in MappingKind}
    ok = uniform == 58 and sizes["u2"] == 59 and sizes["ri"] == 36 and sizes["riu2"] == 10
    return ok, f"uniform={uniform} bins={sizes}"


def _median_example() -> Outcome:
    value = median_of((9, 8, 7, 7, 6, 6, 5, 2, 1))
    return value == 6.0, f"median={value}"


def _bilinear_example() -> Outcome:
    value = bilinear_sample(GrayImage(pixels=[[0.0, 10.0], [20.0, 30.0]]), 0.25, 0.75)
    return math.isclose(value, 17.5, abs_tol=1e-12), f"value={value}"


def _luma_example() -> Outcome:
    value = float(load_image(b"P6\n1 1\n255\n" + bytes((255, 0, 0))).pixels[0, 0])
    return math.isclose(value, 76.245, abs_tol=1e-9), f"gray={value}"


def _var_example() -> Outcome:
    value = var_measure((0.0, 0.0, 10.0, 10.0), 3.0)
    return value == 25.0, f"VAR={value}"


def _ramp_code() -> Outcome:
    ramp = GrayImage(pixels=np.tile(np.arange(5, dtype=np.float64), (5, 1)))
    codes = generalized_lbp(ramp, SamplingSpec(P=4, R=1.0)).codes
    return bool(np.all(codes == 11)), f"codes={sorted(set(codes.ravel().tolist()))}"


def _median_spike() -> Outcome:
    pixels = np.full((5, 5), 10.0)
    pixels[2, 2] = 200.0
    code = int(median_robust_lbp(GrayImage(pixels=pixels), SamplingSpec(P=4, R=1.0), 3).codes[0, 0])
    return code == 15, f"code={code}"


def _chi_square_example() -> Outcome:
    value = histogram_distance(DistanceKind.CHI_SQUARE, (2.0, 1.0), (1.0, 2.0))
    return math.isclose(value, 2.0 / 3.0, rel_tol=1e-12), f"chi2={value}"


def _split_example() -> Outcome:
    data = LabeledDataset.from_rows([[float(i)] for i in range(100)], ["x"] * 100)
    split = split_dataset(data, (0.5, 0.25, 0.25), seed=0)
    values = sorted(
        float(v) for part in (split.train, split.validation, split.test) for v in part.features.ravel()
    )
    return split.sizes == (50, 25, 25) and values == list(range(100)), f"sizes={split.sizes}"


def _knn_example() -> Outcome:
    train = LabeledDataset.from_rows([[0.0], [2.0], [10.0], [11.0]], ["A", "A", "B", "B"])
    result = knn_classify(train, KnnConfig(k=3, distance_kind=DistanceKind.L1), [6.0])
    return result.label == "B" and result.neighbors == (1, 2, 3), f"label={result.label}"


def _kmeans_example() -> Outcome:
    points = np.array([[0.0], [1.0], [9.0], [10.0]])
    model = kmeans_fit(points, 2, seed=0, initial_centroids=np.array([[0.0], [9.0]]))
    centroids = model.centroids.ravel().tolist()
    return centroids == [0.5, 9.5] and model.converged, f"centroids={centroids}"


def _pca_example() -> Outcome:
    model = pca_fit(np.array([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]]))
    ok = np.allclose(model.variances, [2.0, 0.5]) and np.allclose(model.components, np.eye(2))
    return ok, f"variances={model.variances.tolist()}"


def _roc_example() -> Outcome:
    samples = scored_samples((0.8, 0.4, 0.6, 0.2), (True, True, False, False))
    auc, pairs = roc_curve(samples).auc, auc_mann_whitney(samples)
    return auc == 0.75 and pairs == 0.75, f"auc={auc} pairs={pairs}"


def _pr_example() -> Outcome:
    samples = scored_samples((0.8, 0.3, 0.6, 0.1), (True, True, False, False))
    points = pr_curve(samples).points
    expected = ((0.5, 1.0), (0.5, 0.5), (1.0, 2.0 / 3.0), (1.0, 0.5))
    return points == expected, f"points={points}"


CHECKS: Tuple[Tuple[str, Callable[[], Outcome]], ...] = (
    ("basic-lbp-code-and-contrast", _basic_code_and_contrast),
    ("basic-lbp-histogram", _basic_histogram_one_hot),
    ("basic-lbp-constant-patch", _constant_patch),
    ("full-histogram-lengths", _full_lengths),
    ("mapping-bin-counts", _mapping_sizes),
    ("median-odd-count", _median_example),
    ("bilinear-weights", _bilinear_example),
    ("ppm-luma", _luma_example),
    ("var-measure", _var_example),
    ("ramp-code", _ramp_code),
    ("median-robust-spike", _median_spike),
    ("split-ratios", _split_example),
    ("chi-square", _chi_square_example),
    ("knn-vote", _knn_example),
    ("kmeans-two-clusters", _kmeans_example),
    ("pca-axes", _pca_example),
    ("roc-auc", _roc_example),
    ("pr-points", _pr_example),
)


def run_golden_checks() -> List[CheckResult]:
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except OpenLBPError as exc:
            passed, detail = False, str(exc)
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    logger.debug("Golden checks run", passed=sum(r.passed for r in results), total=len(results))
    return results
