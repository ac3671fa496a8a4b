"""
Supervised and unsupervised learning on descriptor vectors: splits,
fit-on-train standardization, kNN voting, nearest-model matching and k-means.

Every seeded draw goes through ``openlbp.core.rng.LcgRandom``.
"""
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from openlbp.core.exceptions import (
    EmptyInputError,
    InsufficientDataError,
    InvalidParameterError,
    MismatchError,
)
from openlbp.core.rng import LcgRandom
from openlbp.schemas.dataset import (
    ClassModelSet,
    DistanceKind,
    KMeansModel,
    KnnConfig,
    KnnResult,
    LabeledDataset,
    Normalizer,
    SplitResult,
)
from openlbp.services.distances import distances_to

logger = structlog.get_logger()

RATIO_TOLERANCE = 1e-9
CONSTANT_FEATURE_TOLERANCE = 1e-12
CONVERGENCE_TOLERANCE = 1e-12


def _apportion(total: int, ratios: Sequence[float]) -> List[int]:
    """Largest-remainder sizes summing exactly to ``total``; ties go to earlier parts."""
    quotas = [ratio * total for ratio in ratios]
    sizes = [int(np.floor(quota)) for quota in quotas]
    leftover = total - sum(sizes)
    by_remainder = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in by_remainder[:leftover]:
        sizes[i] += 1
    return sizes


def split_dataset(data: LabeledDataset, ratios: Sequence[float], seed: int) -> SplitResult:
    """Seeded shuffle, then contiguous train/validation/test slices."""
    if len(data) == 0:
        raise EmptyInputError("cannot split an empty dataset")
    ratios = [float(r) for r in ratios]
    if (
        len(ratios) != 3
        or any(not np.isfinite(r) or r < 0 for r in ratios)
        or abs(sum(ratios) - 1.0) > RATIO_TOLERANCE
    ):
        raise InvalidParameterError(
            f"ratios must be three nonnegative numbers summing to 1, got {ratios}",
            code="bad-ratios",
        )

    order = LcgRandom(seed).permutation(len(data))
    train_size, validation_size, _ = _apportion(len(data), ratios)
    cut = train_size + validation_size
    return SplitResult(
        train=data.subset(order[:train_size]),
        validation=data.subset(order[train_size:cut]),
        test=data.subset(order[cut:]),
        seed=seed,
    )


def fit_normalizer(train: LabeledDataset) -> Normalizer:
    """Per-feature mean and population standard deviation of the training rows.

    Constant features (std within 1e-12 of zero, relative to the mean) get
    scale 1 so they map to 0.
    """
    if len(train) == 0:
        raise EmptyInputError("cannot fit a normalizer on no samples", code="empty-training-set")
    means = train.features.mean(axis=0)
    stds = train.features.std(axis=0)
    constant = stds <= CONSTANT_FEATURE_TOLERANCE * np.maximum(1.0, np.abs(means))
    scales = np.where(constant, 1.0, stds)
    logger.debug("Normalizer fitted", samples=len(train), constant_features=int(constant.sum()))
    return Normalizer(means=means, scales=scales)


def _check_dim(norm: Normalizer, data: LabeledDataset) -> None:
    if data.dim != norm.dim:
        raise MismatchError(
            f"normalizer fitted on {norm.dim} features, data has {data.dim}",
            code="dimension-mismatch",
        )


def apply_normalizer(norm: Normalizer, data: LabeledDataset) -> LabeledDataset:
    _check_dim(norm, data)
    return data.with_features((data.features - norm.means) / norm.scales)


def denormalize(norm: Normalizer, data: LabeledDataset) -> LabeledDataset:
    """Inverse of ``apply_normalizer``."""
    _check_dim(norm, data)
    return data.with_features(data.features * norm.scales + norm.means)


def _indices_by_label(labels: Sequence[str]) -> Dict[str, List[int]]:
    groups: Dict[str, List[int]] = {}
    for index, label in enumerate(labels):
        groups.setdefault(label, []).append(index)
    return dict(sorted(groups.items()))


def balance_dataset(data: LabeledDataset, mode: str, seed: int) -> LabeledDataset:
    """Equalize class sizes.

    ``under`` keeps a seeded sample of each class the size of the smallest;
    ``over`` tops every class up to the largest by seeded duplication.
    Output rows are grouped by label in lexicographic order.
    """
    if mode not in ("under", "over"):
        raise InvalidParameterError(f"balance mode must be 'under' or 'over', got {mode!r}")
    if len(data) == 0:
        raise EmptyInputError("cannot balance an empty dataset")

    rng = LcgRandom(seed)
    groups = _indices_by_label(data.labels)
    sizes = [len(members) for members in groups.values()]
    target = min(sizes) if mode == "under" else max(sizes)
    chosen: List[int] = []
    for members in groups.values():
        if mode == "under":
            chosen.extend(rng.sample(members, target))
        else:
            extra = [members[rng.randbelow(len(members))] for _ in range(target - len(members))]
            chosen.extend(members + extra)
    logger.debug("Dataset balanced", mode=mode, classes=len(groups), per_class=target)
    return data.subset(chosen)


def _vote(labels: Sequence[str], distances: Sequence[float]) -> str:
    counts: Counter = Counter()
    summed: Dict[str, float] = {}
    for label, distance in zip(labels, distances):
        counts[label] += 1
        summed[label] = summed.get(label, 0.0) + distance
    return min(counts, key=lambda label: (-counts[label], summed[label], label))


def knn_classify(
    train: LabeledDataset, config: KnnConfig, query: Union[Sequence[float], np.ndarray]
) -> KnnResult:
    """Majority label among the ``k`` nearest training samples.

    Distance ties admit the lower-index sample; vote ties go to the smaller
    summed distance, then the lexicographically smaller label.
    """
    if len(train) < config.k:
        raise InsufficientDataError(
            f"k={config.k} needs at least {config.k} training samples, got {len(train)}"
        )
    distances = distances_to(config.distance_kind, train.features, query)
    nearest = np.argsort(distances, kind="stable")[: config.k]
    neighbor_distances = [float(distances[i]) for i in nearest]
    label = _vote([train.labels[i] for i in nearest], neighbor_distances)
    return KnnResult(
        label=label,
        neighbors=tuple(int(i) for i in nearest),
        distances=tuple(neighbor_distances),
    )


def fit_class_models(train: LabeledDataset) -> ClassModelSet:
    """One mean histogram per label, labels in lexicographic order."""
    if len(train) == 0:
        raise EmptyInputError("no samples to build class models", code="empty-training-set")
    groups = _indices_by_label(train.labels)
    models = np.stack([train.features[members].mean(axis=0) for members in groups.values()])
    return ClassModelSet(labels=tuple(groups), models=models)


def match_model(
    models: ClassModelSet,
    query: Union[Sequence[float], np.ndarray],
    kind: Union[DistanceKind, str] = DistanceKind.CHI_SQUARE,
    reject_above: Optional[float] = None,
) -> Optional[KnnResult]:
    """Nearest class model, or ``None`` when even the best is farther than ``reject_above``."""
    distances = distances_to(kind, models.models, query)
    best = int(np.argmin(distances))
    distance = float(distances[best])
    if reject_above is not None and distance > reject_above:
        logger.debug("Query rejected", best_label=models.labels[best], distance=distance)
        return None
    return KnnResult(label=models.labels[best], neighbors=(best,), distances=(distance,))


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def _initial_centroids(points: np.ndarray, k: int, seed: int) -> np.ndarray:
    """``k`` distinct data points, visited in seeded shuffle order."""
    picked: List[np.ndarray] = []
    for index in LcgRandom(seed).permutation(points.shape[0]):
        candidate = points[index]
        if not any(np.array_equal(candidate, existing) for existing in picked):
            picked.append(candidate)
            if len(picked) == k:
                break
    return np.array(picked)


def _reseed_empty(
    points: np.ndarray, centroids: np.ndarray, assignments: np.ndarray, k: int
) -> None:
    """Move each empty cluster onto the worst-fit point of a cluster that can spare one."""
    for cluster in range(k):
        sizes = np.bincount(assignments, minlength=k)
        if sizes[cluster] > 0:
            continue
        error = ((points - centroids[assignments]) ** 2).sum(axis=1)
        error[sizes[assignments] < 2] = -1.0
        worst = int(np.argmax(error))
        logger.debug("Empty cluster reseeded", cluster=cluster, point=worst)
        centroids[cluster] = points[worst]
        assignments[worst] = cluster


def kmeans_fit(
    features: np.ndarray,
    k: int,
    seed: int,
    max_iter: int = 100,
    initial_centroids: Optional[np.ndarray] = None,
) -> KMeansModel:
    """Lloyd iterations from seeded distinct-point initialization.

    Stops when no centroid moves more than 1e-12 or after ``max_iter``
    rounds. The SSE after every round is kept in ``sse_history``.
    """
    points = np.asarray(features, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise EmptyInputError("k-means needs a nonempty (samples x dim) matrix")
    if k < 1 or max_iter < 1:
        raise InvalidParameterError(f"k and max_iter must be positive, got k={k}, max_iter={max_iter}")
    distinct = np.unique(points, axis=0).shape[0]
    if k > distinct:
        raise InvalidParameterError(
            f"k={k} exceeds the {distinct} distinct points", code="k-too-large"
        )

    if initial_centroids is None:
        centroids = _initial_centroids(points, k, seed)
    else:
        centroids = np.array(initial_centroids, dtype=np.float64).reshape(k, -1)
        if centroids.shape[1] != points.shape[1]:
            raise MismatchError(
                f"initial centroids have {centroids.shape[1]} features, data {points.shape[1]}",
                code="dimension-mismatch",
            )

    history: List[float] = []
    converged = False
    iterations = 0
    assignments = np.zeros(points.shape[0], dtype=np.int64)
    for iterations in range(1, max_iter + 1):
        assignments = np.argmin(_squared_distances(points, centroids), axis=1)
        _reseed_empty(points, centroids, assignments, k)
        updated = np.stack([points[assignments == j].mean(axis=0) for j in range(k)])
        movement = float(np.sqrt(((updated - centroids) ** 2).sum(axis=1)).max())
        centroids = updated
        history.append(float(((points - centroids[assignments]) ** 2).sum()))
        if movement <= CONVERGENCE_TOLERANCE:
            converged = True
            break

    logger.debug(
        "k-means finished", k=k, seed=seed, iterations=iterations, sse=history[-1], converged=converged
    )
    return KMeansModel(
        k=k,
        centroids=centroids,
        assignments=assignments,
        iterations=iterations,
        sse=history[-1],
        sse_history=tuple(history),
        converged=converged,
    )


def kmeans_best_of(
    features: np.ndarray, k: int, seeds: Sequence[int], max_iter: int = 100
) -> KMeansModel:
    """Lowest-SSE fit over several seeds; ties keep the earliest seed."""
    if not seeds:
        raise InvalidParameterError("at least one seed is required")
    best: Optional[KMeansModel] = None
    for seed in seeds:
        model = kmeans_fit(features, k, seed, max_iter)
        if best is None or model.sse < best.sse:
            best = model
    assert best is not None
    return best


def label_clusters(model: KMeansModel, labels: Sequence[str]) -> Tuple[Tuple[str, int], ...]:
    """Majority known label and size of each cluster (label ties go lexicographic)."""
    if len(labels) != model.assignments.size:
        raise MismatchError(
            f"{len(labels)} labels for {model.assignments.size} clustered samples",
            code="length-mismatch",
        )
    result = []
    for cluster in range(model.k):
        members = Counter(labels[i] for i in np.flatnonzero(model.assignments == cluster))
        majority = min(members, key=lambda label: (-members[label], label)) if members else ""
        result.append((majority, sum(members.values())))
    return tuple(result)


def cluster_purity(model: KMeansModel, labels: Sequence[str]) -> float:
    """Fraction of samples carrying their cluster's majority label."""
    matched = sum(
        sum(1 for i in np.flatnonzero(model.assignments == cluster) if labels[i] == majority)
        for cluster, (majority, _) in enumerate(label_clusters(model, labels))
    )
    return matched / len(labels) if labels else 0.0
