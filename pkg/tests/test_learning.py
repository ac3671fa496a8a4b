"""
Distances, splits, standardization, kNN, model matching and k-means.
"""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openlbp.core.exceptions import (
    EmptyInputError,
    InsufficientDataError,
    InvalidParameterError,
    MismatchError,
    NotNormalizedError,
)
from openlbp.core.rng import LcgRandom
from openlbp.schemas.dataset import DistanceKind, KMeansModel, KnnConfig, LabeledDataset, Normalizer
from openlbp.schemas.descriptor import MappingKind, SamplingSpec
from openlbp.schemas.image import GrayImage, VideoVolume
from openlbp.services.distances import (
    distances_to,
    histogram_distance,
    normalized_window_count,
    pairwise_distances,
    weighted_chi_square,
)
from openlbp.services.histograms import grid_descriptor, lbp_top
from openlbp.services.learning import (
    apply_normalizer,
    balance_dataset,
    cluster_purity,
    denormalize,
    fit_class_models,
    fit_normalizer,
    kmeans_best_of,
    kmeans_fit,
    knn_classify,
    label_clusters,
    match_model,
    split_dataset,
)
from openlbp.services.mappings import build_code_mapping


def dataset(rows, labels) -> LabeledDataset:
    return LabeledDataset(features=np.asarray(rows, dtype=np.float64), labels=tuple(labels))


def line(values, labels) -> LabeledDataset:
    return dataset([[v] for v in values], labels)


class TestLcgRandom:
    def test_same_seed_same_stream(self):
        assert LcgRandom(7).permutation(20) == LcgRandom(7).permutation(20)
        assert LcgRandom(7).permutation(20) != LcgRandom(8).permutation(20)

    def test_permutation_covers_range(self):
        assert sorted(LcgRandom(1).permutation(50)) == list(range(50))

    @given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
    def test_randbelow_in_range(self, seed, bound):
        value = LcgRandom(seed).randbelow(bound)
        assert 0 <= value < bound


class TestDistances:
    def test_identical_is_zero(self):
        for kind in DistanceKind:
            assert histogram_distance(kind, [0.25, 0.75], [0.25, 0.75]) == 0.0

    def test_chi_square_disjoint_one_hot(self):
        assert histogram_distance("chi-square", [1, 0], [0, 1]) == 2.0

    def test_chi_square_hand_value(self):
        assert histogram_distance(DistanceKind.CHI_SQUARE, [2, 1], [1, 2]) == pytest.approx(2 / 3)

    def test_empty_bins_skipped(self):
        assert histogram_distance(DistanceKind.CHI_SQUARE, [0, 0, 3], [0, 0, 1]) == pytest.approx(1.0)

    def test_l1_l2(self):
        assert histogram_distance(DistanceKind.L1, [0, 3], [4, 0]) == 7.0
        assert histogram_distance(DistanceKind.L2, [0, 3], [4, 0]) == 5.0

    def test_intersection(self):
        assert histogram_distance("histogram-intersection", [0.5, 0.5], [1.0, 0.0]) == 0.5

    def test_intersection_per_grid_window(self, rng):
        spec = SamplingSpec(P=8, R=1.0)
        mapping = build_code_mapping(MappingKind.U2, 8)
        first, second = (
            grid_descriptor(GrayImage(pixels=rng.uniform(0, 255, (12, 12))), spec, mapping, (2, 2), True)
            for _ in range(2)
        )
        assert normalized_window_count(first.values) == 4
        distance = histogram_distance(DistanceKind.INTERSECTION, first.values, second.values)
        per_window = [
            histogram_distance(DistanceKind.INTERSECTION, first.window(i), second.window(i)) for i in range(4)
        ]
        assert distance == pytest.approx(np.mean(per_window), abs=1e-12)
        assert 0.0 <= distance <= 1.0
        assert histogram_distance(DistanceKind.INTERSECTION, first.values, first.values) == 0.0

    def test_intersection_on_three_planes(self, rng):
        spec = SamplingSpec(P=8, R=1.0)
        mapping = build_code_mapping(MappingKind.RIU2, 8)
        volume = VideoVolume.from_array(rng.uniform(0, 255, (5, 7, 7)))
        descriptor = lbp_top(volume, spec, spec, spec, mapping, True)
        assert normalized_window_count(descriptor.values) == 3
        assert histogram_distance(DistanceKind.INTERSECTION, descriptor.values, descriptor.values) == 0.0

    def test_intersection_rejects_unnormalized_windows(self):
        with pytest.raises(NotNormalizedError):
            normalized_window_count([1.5, 0.5, 0.0, 0.0])
        with pytest.raises(MismatchError):
            histogram_distance(DistanceKind.INTERSECTION, [0.5, 0.5, 1.0, 0.0], [0.5, 0.25, 0.25, 0.0])

    def test_intersection_needs_normalized(self):
        with pytest.raises(NotNormalizedError):
            histogram_distance(DistanceKind.INTERSECTION, [2.0, 0.0], [1.0, 0.0])

    def test_length_mismatch(self):
        with pytest.raises(MismatchError) as info:
            histogram_distance(DistanceKind.L1, [1, 2], [1, 2, 3])
        assert info.value.code == "length-mismatch"

    def test_weighted_chi_square(self):
        h1, h2 = [1, 0, 0, 1], [0, 1, 0, 1]
        assert weighted_chi_square(h1, h2, [2.0, 0.5], 2) == pytest.approx(4.0)
        assert weighted_chi_square(h1, h2, [1.0, 1.0], 2) == histogram_distance("chi-square", h1, h2)

    def test_weighted_chi_square_layout(self):
        with pytest.raises(MismatchError):
            weighted_chi_square([1, 0, 0, 1], [0, 1, 0, 1], [1.0, 1.0, 1.0], 2)

    def test_distances_to_dimension_mismatch(self):
        with pytest.raises(MismatchError) as info:
            distances_to(DistanceKind.L2, np.zeros((3, 2)), [1.0, 2.0, 3.0])
        assert info.value.code == "dimension-mismatch"

    @given(st.integers(0, 2**32 - 1), st.sampled_from(list(DistanceKind)))
    @settings(max_examples=30, deadline=None)
    def test_pairwise_symmetric(self, seed, kind):
        rows = np.random.default_rng(seed).dirichlet(np.ones(5), size=6)
        matrix = pairwise_distances(rows, kind)
        assert np.array_equal(matrix, matrix.T)
        assert np.all(np.diag(matrix) == 0.0)
        assert np.all(matrix >= -1e-12)


class TestSplit:
    def test_sizes(self):
        data = line(range(100), ["x"] * 100)
        assert split_dataset(data, (0.5, 0.25, 0.25), seed=3).sizes == (50, 25, 25)

    def test_largest_remainder(self):
        data = line(range(10), ["x"] * 10)
        assert split_dataset(data, (1 / 3, 1 / 3, 1 / 3), seed=0).sizes == (4, 3, 3)

    def test_disjoint_and_complete(self):
        data = line(range(37), [str(i) for i in range(37)])
        split = split_dataset(data, (0.6, 0.2, 0.2), seed=11)
        parts = [set(part.labels) for part in (split.train, split.validation, split.test)]
        assert sum(len(part) for part in parts) == 37
        assert set.union(*parts) == set(data.labels)

    def test_deterministic(self):
        data = line(range(30), [str(i) for i in range(30)])
        assert split_dataset(data, (0.5, 0.25, 0.25), 5) == split_dataset(data, (0.5, 0.25, 0.25), 5)

    @pytest.mark.parametrize("ratios", [(0.5, 0.5, 0.5), (1.2, -0.1, -0.1), (0.5, 0.5)])
    def test_bad_ratios(self, ratios):
        with pytest.raises(InvalidParameterError) as info:
            split_dataset(line(range(4), "abcd"), ratios, 0)
        assert info.value.code == "bad-ratios"


class TestNormalizer:
    def test_hand_column(self):
        data = line([2, 4, 6], "abc")
        norm = fit_normalizer(data)
        assert norm.means.tolist() == [4.0]
        assert norm.scales[0] == pytest.approx(1.63299, abs=1e-5)
        assert apply_normalizer(norm, data).features.ravel() == pytest.approx(
            [-1.22474, 0.0, 1.22474], abs=1e-5
        )

    def test_constant_column(self):
        data = dataset([[5, 1], [5, 2], [5, 3]], "abc")
        norm = fit_normalizer(data)
        assert norm.scales[0] == 1.0
        assert np.all(apply_normalizer(norm, data).features[:, 0] == 0.0)

    def test_train_statistics(self, rng):
        data = dataset(rng.normal(3.0, 2.0, (40, 4)), ["x"] * 40)
        transformed = apply_normalizer(fit_normalizer(data), data).features
        assert transformed.mean(axis=0) == pytest.approx(np.zeros(4), abs=1e-12)
        assert transformed.var(axis=0) == pytest.approx(np.ones(4), abs=1e-12)

    def test_statistics_come_from_train_only(self, rng):
        data = dataset(rng.normal(0.0, 1.0, (60, 3)), ["x"] * 60)
        split = split_dataset(data, (0.5, 0.25, 0.25), seed=2)
        norm = fit_normalizer(split.train)
        expected = (split.test.features - split.train.features.mean(axis=0)) / split.train.features.std(axis=0)
        assert np.allclose(apply_normalizer(norm, split.test).features, expected, atol=1e-12)

    def test_identity(self):
        data = dataset([[1.5, -2.0]], "a")
        assert apply_normalizer(Normalizer(means=[0, 0], scales=[1, 1]), data) == data

    def test_denormalize_inverts(self, rng):
        data = dataset(rng.uniform(-5, 5, (10, 3)), ["x"] * 10)
        norm = fit_normalizer(data)
        restored = denormalize(norm, apply_normalizer(norm, data)).features
        assert np.allclose(restored, data.features, atol=1e-12)

    def test_errors(self):
        with pytest.raises(EmptyInputError) as info:
            fit_normalizer(LabeledDataset.from_rows([], [], dim=2))
        assert info.value.code == "empty-training-set"
        with pytest.raises(MismatchError):
            apply_normalizer(Normalizer(means=[0], scales=[1]), dataset([[1, 2]], "a"))


class TestBalance:
    def test_under(self):
        data = line([1, 2, 3, 4], ["A", "A", "A", "B"])
        balanced = balance_dataset(data, "under", seed=1)
        assert balanced.labels == ("A", "B")
        assert balanced.features[1, 0] == 4.0

    def test_over(self):
        data = line([1, 2, 3, 4], ["B", "A", "A", "A"])
        balanced = balance_dataset(data, "over", seed=1)
        assert balanced.labels == ("A",) * 3 + ("B",) * 3
        assert balanced.features[3:, 0].tolist() == [1.0, 1.0, 1.0]

    def test_bad_mode(self):
        with pytest.raises(InvalidParameterError):
            balance_dataset(line([1], "A"), "sideways", 0)


def knn_oracle(train: LabeledDataset, k: int, query: np.ndarray) -> str:
    scored = sorted(
        (float(np.sqrt(((row - query) ** 2).sum())), index)
        for index, row in enumerate(train.features)
    )[:k]
    votes = {}
    for distance, index in scored:
        count, total = votes.get(train.labels[index], (0, 0.0))
        votes[train.labels[index]] = (count + 1, total + distance)
    return min(votes, key=lambda label: (-votes[label][0], votes[label][1], label))


class TestKnn:
    def test_one_neighbour(self):
        train = line([0, 10], "AB")
        assert knn_classify(train, KnnConfig(k=1, distance_kind="L2"), [1.0]).label == "A"

    def test_three_neighbours(self):
        train = line([0, 2, 10, 11], "AABB")
        result = knn_classify(train, KnnConfig(k=3, distance_kind=DistanceKind.L2), [6.0])
        assert result.label == "B"
        assert result.neighbors == (1, 2, 3)
        assert result.distances == (4.0, 4.0, 5.0)

    def test_distance_tie_prefers_lower_index(self):
        train = line([4, 8], "XY")
        assert knn_classify(train, KnnConfig(k=1, distance_kind="L1"), [6.0]).neighbors == (0,)

    def test_vote_tie_uses_summed_distance(self):
        train = line([0, 5, 9, 20], "ABAB")
        result = knn_classify(train, KnnConfig(k=2, distance_kind="L1"), [6.0])
        assert result.label == "B"

    def test_vote_tie_then_label(self):
        train = line([4, 8], "ZA")
        assert knn_classify(train, KnnConfig(k=2, distance_kind="L1"), [6.0]).label == "A"

    def test_insufficient(self):
        with pytest.raises(InsufficientDataError):
            knn_classify(line([1, 2], "AB"), KnnConfig(k=3), [1.0])

    def test_matches_oracle(self):
        generator = np.random.default_rng(99)
        for _ in range(100):
            n = int(generator.integers(3, 15))
            train = dataset(generator.integers(0, 4, (n, 2)), [str(c) for c in generator.choice(list("ABC"), n)])
            query = generator.integers(0, 4, 2).astype(np.float64)
            k = int(generator.integers(1, n + 1))
            result = knn_classify(train, KnnConfig(k=k, distance_kind="L2"), query)
            assert result.label == knn_oracle(train, k, query)

    def test_uniform_rescale_keeps_prediction(self, rng):
        train = dataset(rng.uniform(0, 1, (20, 3)), [str(c) for c in rng.choice(list("AB"), 20)])
        query = rng.uniform(0, 1, 3)
        config = KnnConfig(k=5, distance_kind="L2")
        scaled = train.with_features(train.features * 7.5)
        assert knn_classify(train, config, query).label == knn_classify(scaled, config, query * 7.5).label


class TestModelMatching:
    def test_nearest_mean(self):
        train = dataset([[1, 0], [0.8, 0.2], [0, 1], [0.2, 0.8]], "AABB")
        models = fit_class_models(train)
        assert models.labels == ("A", "B")
        assert models.models[0].tolist() == pytest.approx([0.9, 0.1])
        assert match_model(models, [0.7, 0.3]).label == "A"

    def test_reject(self):
        models = fit_class_models(dataset([[1, 0], [0, 1]], "AB"))
        assert match_model(models, [0.5, 0.5], "L1", reject_above=0.5) is None
        assert match_model(models, [0.9, 0.1], "L1", reject_above=0.5).label == "A"


def brute_force_sse(points: np.ndarray, k: int) -> float:
    best = np.inf
    for labels in itertools.product(range(k), repeat=len(points)):
        labels = np.array(labels)
        if len(set(labels.tolist())) < k:
            continue
        sse = sum(((points[labels == j] - points[labels == j].mean(axis=0)) ** 2).sum() for j in range(k))
        best = min(best, sse)
    return best


class TestKMeans:
    def test_single_cluster_is_mean(self, rng):
        points = rng.uniform(0, 10, (12, 2))
        model = kmeans_fit(points, 1, seed=0)
        assert model.converged
        assert model.centroids[0] == pytest.approx(points.mean(axis=0), abs=1e-12)
        assert model.iterations <= 2

    def test_hand_trace(self):
        model = kmeans_fit(np.array([[0.0], [1.0], [9.0], [10.0]]), 2, 0, initial_centroids=[[0.0], [9.0]])
        assert model.centroids.ravel().tolist() == [0.5, 9.5]
        assert model.assignments.tolist() == [0, 0, 1, 1]
        assert model.converged
        assert model.sse == 1.0

    def test_one_point_per_cluster(self, rng):
        points = rng.uniform(0, 1, (6, 3))
        model = kmeans_fit(points, 6, seed=4)
        assert model.sse == 0.0
        assert sorted(model.assignments.tolist()) == list(range(6))

    def test_sse_never_increases(self, rng):
        model = kmeans_fit(rng.normal(0, 1, (80, 2)), 5, seed=3)
        history = np.array(model.sse_history)
        assert np.all(np.diff(history) <= 1e-9)
        assert model.sse == history[-1]

    def test_empty_cluster_reseeded(self):
        points = np.array([[0.0], [1.0], [2.0], [10.0]])
        model = kmeans_fit(points, 2, 0, initial_centroids=[[0.0], [100.0]])
        assert model.centroids.ravel().tolist() == [1.0, 10.0]
        assert model.sse == 2.0

    def test_predict_reproduces_training_assignments(self, rng):
        points = np.vstack([rng.normal(0, 1, (15, 2)), rng.normal(20, 1, (15, 2))])
        model = kmeans_fit(points, 2, seed=3)
        assert np.array_equal(model.predict(points), model.assignments)
        assert model.predict(model.centroids).tolist() == [0, 1]

    def test_predict_ties_go_to_lower_index(self):
        model = KMeansModel(
            k=2, centroids=[[0.0], [2.0]], assignments=[0, 1], iterations=1, sse=0.0
        )
        assert model.predict([[1.0], [1.5], [-3.0]]).tolist() == [0, 1, 0]
        assert model.predict([0.2]).tolist() == [0]

    def test_k_too_large(self):
        with pytest.raises(InvalidParameterError) as info:
            kmeans_fit(np.array([[1.0], [1.0], [2.0]]), 3, 0)
        assert info.value.code == "k-too-large"

    def test_same_seed_same_model(self, rng):
        points = rng.normal(0, 1, (30, 2))
        assert kmeans_fit(points, 3, seed=8) == kmeans_fit(points, 3, seed=8)

    def test_best_of_beats_each_seed(self, rng):
        points = rng.normal(0, 1, (40, 2))
        best = kmeans_best_of(points, 4, seeds=range(6))
        assert best.sse <= min(kmeans_fit(points, 4, seed).sse for seed in range(6))

    def test_reaches_brute_force_optimum(self):
        generator = np.random.default_rng(5)
        for _ in range(5):
            points = generator.uniform(0, 10, (7, 2))
            best = kmeans_best_of(points, 2, seeds=range(20))
            assert best.sse == pytest.approx(brute_force_sse(points, 2), rel=1e-9)

    def test_labels_and_purity(self):
        model = kmeans_fit(np.array([[0.0], [1.0], [9.0], [10.0], [11.0]]), 2, 0, initial_centroids=[[0.0], [9.0]])
        labels = ["a", "a", "b", "b", "a"]
        assert label_clusters(model, labels) == (("a", 2), ("b", 3))
        assert cluster_purity(model, labels) == pytest.approx(0.8)
