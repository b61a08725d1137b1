"""Loading, validation, repair, and resampling of UCR-style labeled time series datasets.

The canonical on-disk format is the UCR Archive layout: one series per line,
label first, values tab-separated. Rows with missing values are repaired at
load time and variable-length rows are stretched to the longest row, so every
in-memory dataset is a dense rectangular array.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter1d

# Sigma at or below this value means "no smoothing" in the resampling pipeline.
SIGMA_EPSILON = 1e-9


class DatasetFormatError(ValueError):
    """Raised when an input file violates the expected dataset format."""


@dataclass(frozen=True)
class LabeledSeries:
    """One time series with its class label (values are finite after loading)."""

    values: np.ndarray
    label: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("series values must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("series values must be finite after loading")
        if self.label < 0:
            raise ValueError("class label must be a non-negative integer")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """A named collection of equal-length labeled series.

    Labels are contiguous 0-based integers; the mapping back to the raw labels
    found in the source file is kept in ``raw_label_map`` (canonical raw label
    string -> internal id). ``values`` has shape (n_series, length) and is
    read-only, so a dataset can be shared freely across workers.
    """

    name: str
    values: np.ndarray
    labels: np.ndarray
    raw_label_map: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if values.ndim != 2 or values.shape[0] == 0 or values.shape[1] == 0:
            raise ValueError("dataset needs a non-empty (n_series, length) value array")
        if labels.shape != (values.shape[0],):
            raise ValueError("labels must be one per series")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset values must be finite")
        present = np.unique(labels)
        if present[0] != 0 or present[-1] != present.size - 1:
            raise ValueError("labels must be contiguous integers starting at 0")
        if not self.raw_label_map:
            object.__setattr__(
                self, "raw_label_map", {str(c): int(c) for c in present}
            )
        mapped = sorted(self.raw_label_map.values())
        if mapped != list(range(present.size)):
            raise ValueError("raw_label_map must be a bijection onto 0..K-1")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def length(self) -> int:
        return self.values.shape[1]

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.labels))

    @property
    def series(self) -> tuple[LabeledSeries, ...]:
        return tuple(
            LabeledSeries(self.values[i], int(self.labels[i]))
            for i in range(self.n_series)
        )

    def class_indices(self, label: int) -> np.ndarray:
        """Row indices of every series belonging to ``label``, in file order."""
        return np.flatnonzero(self.labels == label)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.raw_label_map == other.raw_label_map
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.labels, other.labels)
        )


@dataclass(frozen=True)
class ResampleSpec:
    """Target length plus the Gaussian kernel width used before interpolation."""

    target_length: int
    smoothing_sigma: float

    def __post_init__(self):
        if self.target_length < 2:
            raise ValueError("target_length must be >= 2")
        if not (self.smoothing_sigma > 0 and math.isfinite(self.smoothing_sigma)):
            raise ValueError("smoothing_sigma must be a positive finite real")


def _repair_row(row: np.ndarray, line_no: int) -> np.ndarray:
    """Fill NaNs by linear interpolation interior and edge extension at boundaries."""
    finite = np.isfinite(row)
    n_finite = int(finite.sum())
    if n_finite < 2:
        raise DatasetFormatError(
            f"line {line_no}: fewer than 2 numeric values after parsing"
        )
    if n_finite == row.size:
        return row
    idx = np.flatnonzero(finite)
    # np.interp extends edge values beyond the first/last finite sample.
    return np.interp(np.arange(row.size), idx, row[idx])


def _stretch_row(row: np.ndarray, target: int) -> np.ndarray:
    if row.size == target:
        return row
    positions = np.linspace(0.0, row.size - 1, target)
    return np.interp(positions, np.arange(row.size), row)


def _canonical_label(raw: str) -> tuple[float, str]:
    """Numeric sort key and canonical text for a raw label token."""
    value = float(raw)
    if not math.isfinite(value):
        raise DatasetFormatError(f"label {raw!r} is not a finite number")
    canonical = str(int(value)) if value == int(value) else repr(value)
    return value, canonical


def dataset_name_from_path(path: str | Path) -> str:
    """Dataset name for a file path: the stem minus any _TRAIN/_TEST suffix."""
    stem = Path(path).stem
    for suffix in ("_TRAIN", "_TEST"):
        if stem.endswith(suffix):
            return stem[: -len(suffix)]
    return stem


def load_ucr_tsv(
    path: str | Path,
    name: str | None = None,
    whitespace: bool = False,
) -> LabeledDataset:
    """Load a UCR-style TSV file into a LabeledDataset.

    Each line is ``label<TAB>v1<TAB>v2...``; ``whitespace=True`` accepts any
    whitespace separation instead. Missing values (NaN or empty fields) are
    repaired by linear interpolation across interior gaps and edge-value
    extension at the boundaries. Rows shorter than the longest row are
    stretched to it by linear interpolation. Raw labels are remapped to
    contiguous 0-based integers, with the mapping recorded on the dataset.
    """
    path = Path(path)
    text = path.read_text()
    raw_labels: list[str] = []
    rows: list[np.ndarray] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split() if whitespace else line.rstrip("\n").split("\t")
        if len(tokens) < 2:
            raise DatasetFormatError(
                f"line {line_no}: expected a label and at least one value"
            )
        try:
            _canonical_label(tokens[0])
        except ValueError as exc:
            raise DatasetFormatError(f"line {line_no}: bad label {tokens[0]!r}") from exc
        raw_labels.append(tokens[0])
        try:
            row = np.array(
                [float(tok) if tok.strip() else np.nan for tok in tokens[1:]],
                dtype=np.float64,
            )
        except ValueError as exc:
            raise DatasetFormatError(f"line {line_no}: non-numeric value") from exc
        rows.append(_repair_row(row, line_no))
    if not rows:
        raise DatasetFormatError(f"{path}: no data rows")

    max_len = max(row.size for row in rows)
    values = np.vstack([_stretch_row(row, max_len) for row in rows])

    keyed = {}
    for raw in raw_labels:
        sort_key, canonical = _canonical_label(raw)
        keyed[canonical] = sort_key
    ordered = sorted(keyed, key=lambda c: keyed[c])
    label_map = {canonical: i for i, canonical in enumerate(ordered)}
    labels = np.array(
        [label_map[_canonical_label(raw)[1]] for raw in raw_labels], dtype=np.int64
    )

    return LabeledDataset(
        name=name if name is not None else dataset_name_from_path(path),
        values=values,
        labels=labels,
        raw_label_map=label_map,
    )


def save_tsv(ds: LabeledDataset, path: str | Path) -> None:
    """Write a dataset back to TSV with its original (raw) labels.

    Values use shortest round-trip float formatting, so parsing the written
    file yields the dataset back exactly.
    """
    inverse = {v: k for k, v in ds.raw_label_map.items()}
    lines = []
    for i in range(ds.n_series):
        label = inverse[int(ds.labels[i])]
        lines.append("\t".join([label] + [repr(float(v)) for v in ds.values[i]]))
    Path(path).write_text("\n".join(lines) + "\n")


def dataset_metadata(ds: LabeledDataset, resample: ResampleSpec | None = None) -> dict:
    """Metadata dict for the JSON sidecar that accompanies emitted datasets."""
    meta = {
        "name": ds.name,
        "length": ds.length,
        "classes": list(ds.classes),
        "raw_label_map": dict(ds.raw_label_map),
    }
    if resample is not None:
        meta["resample"] = {
            "target_length": resample.target_length,
            "sigma": resample.smoothing_sigma,
        }
    return meta


def save_metadata(ds: LabeledDataset, path: str | Path, resample: ResampleSpec | None = None) -> None:
    Path(path).write_text(json.dumps(dataset_metadata(ds, resample), indent=2) + "\n")


def resample(series: np.ndarray, spec: ResampleSpec) -> np.ndarray:
    """Resample one series to ``spec.target_length`` values.

    Pipeline: (1) Gaussian smoothing with ``spec.smoothing_sigma`` and
    edge-replication padding, skipped when sigma <= SIGMA_EPSILON;
    (2) linear interpolation at target_length equally spaced positions
    over [0, n-1]. With sigma at the epsilon and target length equal to
    the input length the output equals the input.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1 or series.size == 0:
        raise ValueError("series must be a non-empty 1-d sequence")
    if spec.smoothing_sigma > SIGMA_EPSILON:
        smoothed = gaussian_filter1d(series, spec.smoothing_sigma, mode="nearest")
    else:
        smoothed = series
    if spec.target_length == series.size:
        return smoothed.copy()
    positions = np.linspace(0.0, series.size - 1, spec.target_length)
    return np.interp(positions, np.arange(series.size), smoothed)


def resample_spec_for(source_length: int, target_length: int) -> ResampleSpec:
    """Kernel width rule: half the shrink ratio when downsampling, epsilon otherwise."""
    if source_length > target_length:
        sigma = max(SIGMA_EPSILON, (source_length / target_length) / 2.0)
    else:
        sigma = SIGMA_EPSILON
    return ResampleSpec(target_length=target_length, smoothing_sigma=sigma)


def resample_dataset(ds: LabeledDataset, target_length: int) -> LabeledDataset:
    """Resample every series of ``ds`` to ``target_length``; labels are untouched."""
    spec = resample_spec_for(ds.length, target_length)
    if target_length == ds.length and spec.smoothing_sigma <= SIGMA_EPSILON:
        return ds
    values = np.vstack([resample(ds.values[i], spec) for i in range(ds.n_series)])
    return LabeledDataset(
        name=ds.name,
        values=values,
        labels=ds.labels.copy(),
        raw_label_map=dict(ds.raw_label_map),
    )
