"""
Domain schemas re-exported for convenience.
"""
from openlbp.schemas.cli import CheckResult, CommandSpec, RunReport
from openlbp.schemas.dataset import (
    ClassModelSet,
    DistanceKind,
    KMeansModel,
    KnnConfig,
    KnnResult,
    LabeledDataset,
    Normalizer,
    PcaModel,
    SplitResult,
)
from openlbp.schemas.descriptor import (
    CodeImage,
    CodeMapping,
    Descriptor,
    MappingKind,
    SamplingSpec,
    TexturePixelStats,
    TextureStatsMap,
)
from openlbp.schemas.evaluation import ConfusionCounts, PrCurve, RocCurve, ScoredSample
from openlbp.schemas.image import GrayImage, RasterFormat, RasterHeader, VideoVolume

__all__ = [
    "CheckResult",
    "ClassModelSet",
    "CodeImage",
    "CodeMapping",
    "CommandSpec",
    "ConfusionCounts",
    "Descriptor",
    "DistanceKind",
    "GrayImage",
    "KMeansModel",
    "KnnConfig",
    "KnnResult",
    "LabeledDataset",
    "MappingKind",
    "Normalizer",
    "PcaModel",
    "PrCurve",
    "RasterFormat",
    "RasterHeader",
    "RocCurve",
    "RunReport",
    "SamplingSpec",
    "ScoredSample",
    "SplitResult",
    "TexturePixelStats",
    "TextureStatsMap",
    "VideoVolume",
]
