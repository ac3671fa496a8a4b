"""
Desk-scale acceptance: invariance sweeps, synthetic texture classification,
cluster-then-label, oracles and throughput.

Run only these with ``pytest -m acceptance``.
"""
import itertools
import time

import numpy as np
import pytest

from openlbp.schemas.dataset import DistanceKind, KnnConfig, LabeledDataset
from openlbp.schemas.descriptor import MappingKind, SamplingSpec
from openlbp.schemas.image import GrayImage
from openlbp.scripts.create_test_data import make_texture_set
from openlbp.services.evaluation import auc_mann_whitney, roc_curve, scored_samples
from openlbp.services.histograms import grid_descriptor, grid_histogram, lbp_histogram
from openlbp.services.lbp import basic_lbp, generalized_lbp
from openlbp.services.learning import cluster_purity, kmeans_best_of, kmeans_fit, knn_classify
from openlbp.services.mappings import build_code_mapping
from openlbp.services.reduction import mds_embed

pytestmark = pytest.mark.acceptance

SPEC_8_1 = SamplingSpec(P=8, R=1.0)


def u2_features(images) -> np.ndarray:
    mapping = build_code_mapping(MappingKind.U2, 8)
    return np.array([grid_descriptor(image, SPEC_8_1, mapping, (1, 1), True).values for image in images])


def accuracy(train: LabeledDataset, test: LabeledDataset, kind: DistanceKind) -> float:
    config = KnnConfig(k=1, distance_kind=kind)
    hits = sum(
        knn_classify(train, config, row).label == label for row, label in zip(test.features, test.labels)
    )
    return hits / len(test)


def test_monotone_lookup_keeps_basic_codes():
    generator = np.random.default_rng(1)
    for _ in range(1000):
        pixels = generator.integers(0, 256, (32, 32))
        table = np.cumsum(generator.uniform(1e-3, 10.0, 256))
        before, _ = basic_lbp(GrayImage(pixels=pixels))
        after, _ = basic_lbp(GrayImage(pixels=table[pixels]))
        assert np.array_equal(before.codes, after.codes)


def test_affine_transform_keeps_circular_codes():
    generator = np.random.default_rng(2)
    for _ in range(1000):
        pixels = generator.uniform(0.0, 255.0, (32, 32))
        a, b = generator.uniform(0.1, 10.0), generator.uniform(-50.0, 50.0)
        before = generalized_lbp(GrayImage(pixels=pixels), SPEC_8_1)
        after = generalized_lbp(GrayImage(pixels=a * pixels + b), SPEC_8_1)
        assert np.array_equal(before.codes, after.codes)


def test_grid_windows_conserve_counts():
    generator = np.random.default_rng(3)
    for _ in range(100):
        gx, gy = (int(v) for v in generator.integers(1, 6, 2))
        width = gx * int(generator.integers(1, 8)) + 2
        height = gy * int(generator.integers(1, 8)) + 2
        mapping = build_code_mapping(list(MappingKind)[int(generator.integers(0, 4))], 8)
        codes = generalized_lbp(GrayImage(pixels=generator.integers(0, 256, (height, width))), SPEC_8_1)
        windows = grid_histogram(codes, mapping, (gx, gy), False).values.reshape(gx * gy, -1)
        assert np.array_equal(windows.sum(axis=0), lbp_histogram(codes, mapping, False).values)


def test_texture_classification_beats_raw_pixels():
    train_set = make_texture_set(per_class=40, seed=11)
    test_set = make_texture_set(per_class=40, seed=12)
    train_labels = [family for family, _ in train_set]
    test_labels = [family for family, _ in test_set]

    lbp_train = LabeledDataset(features=u2_features([i for _, i in train_set]), labels=tuple(train_labels))
    lbp_test = LabeledDataset(features=u2_features([i for _, i in test_set]), labels=tuple(test_labels))
    raw_train = LabeledDataset(
        features=np.array([i.pixels.ravel() for _, i in train_set]), labels=tuple(train_labels)
    )
    raw_test = LabeledDataset(
        features=np.array([i.pixels.ravel() for _, i in test_set]), labels=tuple(test_labels)
    )

    lbp_accuracy = accuracy(lbp_train, lbp_test, DistanceKind.CHI_SQUARE)
    raw_accuracy = accuracy(raw_train, raw_test, DistanceKind.L2)
    print(f"held-out accuracy: LBP u2 chi-square {lbp_accuracy:.3f}, raw pixels L2 {raw_accuracy:.3f}")
    assert lbp_accuracy >= 0.95
    assert lbp_accuracy > raw_accuracy


def test_cluster_then_label_purity():
    families = ("horizontal", "vertical", "noise")
    samples = make_texture_set(families=families, per_class=30, seed=21)
    features = u2_features([image for _, image in samples])
    model = kmeans_best_of(features, 3, seeds=range(10))
    purity = cluster_purity(model, [family for family, _ in samples])
    print(f"cluster purity {purity:.3f}")
    assert purity >= 0.9


def test_kmeans_descends_every_iteration():
    generator = np.random.default_rng(4)
    for run in range(100):
        points = generator.normal(0.0, 1.0, (int(generator.integers(10, 60)), 3))
        model = kmeans_fit(points, int(generator.integers(2, 6)), seed=run)
        assert np.all(np.diff(model.sse_history) <= 1e-9 * max(1.0, model.sse_history[0]))


def test_kmeans_reaches_two_partition_optimum():
    generator = np.random.default_rng(5)
    for count in range(3, 9):
        points = generator.uniform(0.0, 10.0, (count, 2))
        optimum = np.inf
        for mask in itertools.product((False, True), repeat=count):
            side = np.array(mask)
            if side.all() or not side.any():
                continue
            sse = sum(((group - group.mean(axis=0)) ** 2).sum() for group in (points[side], points[~side]))
            optimum = min(optimum, sse)
        best = min(
            kmeans_fit(points, 2, 0, initial_centroids=points[[i, j]]).sse
            for i, j in itertools.combinations(range(count), 2)
        )
        assert best == pytest.approx(optimum, rel=1e-9)


def oracle_distance(kind: DistanceKind, a: np.ndarray, b: np.ndarray) -> float:
    if kind == DistanceKind.CHI_SQUARE:
        return sum((x - y) ** 2 / (x + y) for x, y in zip(a, b) if x + y > 0)
    if kind == DistanceKind.L1:
        return sum(abs(x - y) for x, y in zip(a, b))
    if kind == DistanceKind.L2:
        return sum((x - y) ** 2 for x, y in zip(a, b)) ** 0.5
    return 1.0 - sum(min(x, y) for x, y in zip(a, b))


@pytest.mark.parametrize("kind", list(DistanceKind))
def test_knn_matches_exhaustive_sort(kind):
    generator = np.random.default_rng(6)
    for _ in range(100):
        n = int(generator.integers(5, 30))
        train = LabeledDataset(
            features=generator.dirichlet(np.ones(6), size=n),
            labels=tuple(str(c) for c in generator.choice(list("ABC"), n)),
        )
        query = generator.dirichlet(np.ones(6))
        k = int(generator.integers(1, 6))
        ranked = sorted(
            (oracle_distance(kind, row, query), index) for index, row in enumerate(train.features)
        )[:k]
        votes = {}
        for distance, index in ranked:
            count, total = votes.get(train.labels[index], (0, 0.0))
            votes[train.labels[index]] = (count + 1, total + distance)
        expected = min(votes, key=lambda label: (-votes[label][0], votes[label][1], label))
        assert knn_classify(train, KnnConfig(k=k, distance_kind=kind), query).label == expected


def test_trapezoid_auc_matches_pair_count():
    generator = np.random.default_rng(7)
    for _ in range(100):
        n = int(generator.integers(2, 200))
        scores = np.round(generator.uniform(0, 1, n), int(generator.integers(1, 4)))
        labels = generator.uniform(size=n) < 0.5
        labels[:2] = (True, False)
        samples = scored_samples(scores, labels)
        assert roc_curve(samples).auc == pytest.approx(auc_mann_whitney(samples), abs=1e-12)


def test_random_scores_give_chance_auc():
    generator = np.random.default_rng(8)
    labels = np.arange(10000) % 2 == 0
    auc = roc_curve(scored_samples(generator.uniform(size=10000), labels)).auc
    assert 0.45 <= auc <= 0.55


def test_mds_reconstructs_planar_distances():
    points = np.random.default_rng(9).uniform(-10, 10, (50, 2))
    distances = np.sqrt(((points[:, None] - points[None, :]) ** 2).sum(axis=2))
    coords = mds_embed(distances, 2)
    rebuilt = np.sqrt(((coords[:, None] - coords[None, :]) ** 2).sum(axis=2))
    assert np.abs(rebuilt - distances).max() <= 1e-6 * distances.max()


def test_basic_lbp_throughput():
    image = GrayImage(pixels=np.random.default_rng(10).integers(0, 256, (512, 512)))
    timings = []
    for _ in range(5):
        start = time.perf_counter()
        basic_lbp(image)
        timings.append(time.perf_counter() - start)
    print(f"basic_lbp 512x512: best {min(timings) * 1e3:.1f} ms")
    assert min(timings) < 0.05
