"""
CSV and JSON formats for descriptors, datasets, scores, curves and fitted models.

Numbers in CSV are printed with ``settings.CSV_PRECISION`` significant
digits, which prints integral counts without a decimal point. JSON uses
Python's shortest round-trip representation, so every float reads back
bit-identical.
"""
import csv
import io
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Type, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from openlbp.core.config import settings
from openlbp.core.exceptions import DataFileError
from openlbp.schemas.dataset import KMeansModel, LabeledDataset, Normalizer, PcaModel
from openlbp.schemas.descriptor import Descriptor, MappingKind, SamplingSpec
from openlbp.schemas.evaluation import PrCurve, RocCurve, ScoredSample

PathLike = Union[str, Path]

DESCRIPTOR_FIELDS = ("id", "gx", "gy", "P", "R", "mapping")
SCORES_HEADER = ["score", "label"]
MODEL_TYPES: Dict[str, Type[BaseModel]] = {
    "normalizer": Normalizer,
    "kmeans": KMeansModel,
    "pca": PcaModel,
    "descriptor": Descriptor,
}


def format_number(value: float, precision: Optional[int] = None) -> str:
    digits = settings.CSV_PRECISION if precision is None else precision
    return f"{float(value):.{digits}g}"


def csv_row(fields: Iterable[Any]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerow(list(fields))
    return buffer.getvalue()


def _data_rows(path: str, text: str) -> Iterator[Tuple[int, List[str]]]:
    """Non-blank, non-comment CSV rows with their 1-based line numbers."""
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            yield number, next(csv.reader([line]))
        except csv.Error as exc:
            raise DataFileError(f"unreadable CSV row: {exc}", path, number) from exc


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataFileError(f"cannot read file: {exc}", str(path)) from exc


def _parse_float(token: str, path: str, line: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataFileError(f"{what} is not a number: {token!r}", path, line) from None
    if not np.isfinite(value):
        raise DataFileError(f"{what} is not finite: {token!r}", path, line)
    return value


# Descriptors


def descriptor_header(length: int) -> str:
    return csv_row(list(DESCRIPTOR_FIELDS) + [f"v{i}" for i in range(length)])


def descriptor_row(descriptor: Descriptor, identifier: Optional[str] = None) -> str:
    gx, gy = descriptor.grid
    name = identifier if identifier is not None else descriptor.source or ""
    fields = [
        name,
        gx,
        gy,
        descriptor.spec.P,
        format_number(descriptor.spec.R),
        descriptor.mapping_kind.value,
    ]
    return csv_row(fields + [format_number(v) for v in descriptor.values])


def write_descriptors_csv(stream: TextIO, descriptors: Sequence[Descriptor]) -> None:
    if not descriptors:
        return
    stream.write(descriptor_header(descriptors[0].values.size))
    for descriptor in descriptors:
        stream.write(descriptor_row(descriptor))


def read_descriptors_csv(path: PathLike, planes: int = 1) -> List[Descriptor]:
    """Parse rows written by ``write_descriptors_csv``.

    The CSV does not record normalization or planes; ``planes`` must be given
    for LBP-TOP rows and ``normalized`` is inferred from window sums.
    """
    name = str(path)
    rows = list(_data_rows(name, _read_text(path)))
    if not rows or rows[0][1][:1] != ["id"]:
        raise DataFileError("missing descriptor header row", name, rows[0][0] if rows else None)
    descriptors = []
    for line, fields in rows[1:]:
        if len(fields) < len(DESCRIPTOR_FIELDS) + 1:
            raise DataFileError("descriptor row has no values", name, line)
        try:
            gx, gy, p_bits = int(fields[1]), int(fields[2]), int(fields[3])
            spec = SamplingSpec(P=p_bits, R=_parse_float(fields[4], name, line, "R"))
            kind = MappingKind(fields[5])
        except (ValueError, ValidationError) as exc:
            raise DataFileError(f"bad descriptor metadata: {exc}", name, line) from None
        values = np.array(
            [_parse_float(v, name, line, "value") for v in fields[len(DESCRIPTOR_FIELDS):]]
        )
        windows = gx * gy * planes
        if windows < 1 or values.size % windows:
            raise DataFileError(f"{values.size} values do not split into {windows} windows", name, line)
        sums = values.reshape(windows, -1).sum(axis=1)
        normalized = bool(np.all((np.abs(sums - 1.0) <= 1e-9) | (sums == 0)))
        try:
            descriptors.append(
                Descriptor(
                    values=values,
                    bins_per_window=values.size // windows,
                    grid=(gx, gy),
                    normalized=normalized,
                    spec=spec,
                    mapping_kind=kind,
                    planes=planes,
                    source=fields[0] or None,
                )
            )
        except ValidationError as exc:
            raise DataFileError(f"invalid descriptor: {exc.errors()[0]['msg']}", name, line) from None
    return descriptors


# Labeled datasets


def write_dataset_csv(stream: TextIO, data: LabeledDataset) -> None:
    stream.write(csv_row(["label"] + [f"f{i}" for i in range(data.dim)]))
    for label, row in zip(data.labels, data.features):
        stream.write(dataset_row(label, row))


def dataset_row(label: str, features: Iterable[float]) -> str:
    return csv_row([label] + [format_number(v) for v in features])


def read_dataset_csv(path: PathLike) -> LabeledDataset:
    """Read ``label,f0,f1,...`` rows after a header.

    Descriptor CSV files (header starting with ``id``) are accepted too: the
    id becomes the label and the metadata columns are skipped.
    """
    name = str(path)
    rows = list(_data_rows(name, _read_text(path)))
    if not rows:
        raise DataFileError("no header row", name)
    header_line, header = rows[0]
    skip = len(DESCRIPTOR_FIELDS) if header[:1] == ["id"] else 1
    width = len(header) - skip
    if width < 1:
        raise DataFileError("header names no feature columns", name, header_line)

    labels: List[str] = []
    features: List[List[float]] = []
    for line, fields in rows[1:]:
        if len(fields) != len(header):
            raise DataFileError(
                f"expected {len(header)} columns, found {len(fields)}", name, line
            )
        labels.append(fields[0].strip())
        features.append(
            [_parse_float(v, name, line, f"column {skip + i + 1}") for i, v in enumerate(fields[skip:])]
        )
    return LabeledDataset(features=np.array(features).reshape(len(features), width), labels=tuple(labels))


# Scores and curves


def read_scores_csv(path: PathLike) -> List[ScoredSample]:
    """Rows ``score,label`` with label 0 or 1; an initial ``score,label`` header is optional."""
    name = str(path)
    samples = []
    for index, (line, fields) in enumerate(_data_rows(name, _read_text(path))):
        if index == 0 and [field.strip().lower() for field in fields] == SCORES_HEADER:
            continue
        if len(fields) != 2:
            raise DataFileError(f"expected 'score,label', found {len(fields)} columns", name, line)
        score = _parse_float(fields[0], name, line, "score")
        label = fields[1].strip()
        if label not in ("0", "1"):
            raise DataFileError(f"label must be 0 or 1, got {label!r}", name, line)
        samples.append(ScoredSample(score=score, label=label == "1"))
    return samples


def write_roc_csv(stream: TextIO, curve: RocCurve) -> None:
    stream.write("fpr,tpr\n")
    for fpr, tpr in curve.points:
        stream.write(csv_row([format_number(fpr), format_number(tpr)]))
    stream.write(f"# auc={format_number(curve.auc)}\n")


def write_pr_csv(stream: TextIO, curve: PrCurve) -> None:
    stream.write("recall,precision\n")
    for recall, precision in curve.points:
        stream.write(csv_row([format_number(recall), format_number(precision)]))


def write_matrix_csv(stream: TextIO, matrix: np.ndarray, prefix: str, labels: Optional[Sequence[str]] = None) -> None:
    """Numeric matrix with columns ``<prefix>0..``; an optional leading label column."""
    columns = [f"{prefix}{i}" for i in range(matrix.shape[1])]
    stream.write(csv_row((["label"] if labels is not None else []) + columns))
    for index, row in enumerate(matrix):
        lead = [labels[index]] if labels is not None else []
        stream.write(csv_row(lead + [format_number(v) for v in row]))


# Fitted models


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, BaseModel):
        return {name: _to_jsonable(getattr(value, name)) for name in type(value).model_fields}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (tuple, list)):
        return [_to_jsonable(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def model_to_json(model: BaseModel) -> str:
    kind = next((k for k, cls in MODEL_TYPES.items() if isinstance(model, cls)), None)
    if kind is None:
        raise TypeError(f"no JSON format for {type(model).__name__}")
    payload = {"type": kind, **_to_jsonable(model)}
    return json.dumps(payload, indent=2) + "\n"


def model_from_json(text: str, source: str = "<string>") -> BaseModel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFileError(f"invalid JSON: {exc.msg}", source, exc.lineno) from None
    if not isinstance(payload, dict) or payload.get("type") not in MODEL_TYPES:
        raise DataFileError("JSON object lacks a known 'type'", source)
    model_class = MODEL_TYPES[payload.pop("type")]
    try:
        return model_class.model_validate(payload)
    except ValidationError as exc:
        raise DataFileError(f"invalid {model_class.__name__}: {exc.errors()[0]['msg']}", source) from None


def save_model(path: PathLike, model: BaseModel) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: PathLike) -> BaseModel:
    return model_from_json(_read_text(path), str(path))
