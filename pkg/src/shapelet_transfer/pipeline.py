"""Source ranking and balanced super-dataset assembly for multi-source pre-training.

Candidates are ranked by a dataset distance to the target (ascending). The
selected sources are resampled to the target length, oversampled to a common
per-source quota while preserving class ratios, given disjoint label offsets,
and merged into one TSV plus a manifest that records how to decode it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset_io import (
    LabeledDataset,
    ResampleSpec,
    resample_dataset,
    resample_spec_for,
    save_tsv,
)
from .distances import (
    avg_shapelet_distance,
    class_prototypes,
    min_prototype_dtw,
    min_shapelet_distance,
)
from .shapelets import discover

MEASURES = ("avg_shapelet", "min_shapelet", "dba_dtw")
# Named by the CLI for future extension; asking for one is an error today.
RESERVED_MEASURES = ("nce", "logme", "transrate", "h_score")

DEFAULT_WINDOW = 15
DEFAULT_TOP_K = 10
DEFAULT_NUM_SOURCES = 14


@dataclass(frozen=True)
class RankEntry:
    source: str
    distance: float


@dataclass(frozen=True)
class RankFailure:
    source: str
    reason: str


@dataclass(frozen=True)
class SourceRanking:
    """Candidates ordered by ascending distance to the target.

    Candidates that failed the measure's preconditions are listed under
    ``errors`` rather than silently dropped.
    """

    target: str
    measure: str
    window: int
    k: int
    entries: tuple[RankEntry, ...]
    errors: tuple[RankFailure, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "measure": self.measure,
            "window": self.window,
            "k": self.k,
            "entries": [
                {"source": e.source, "distance": e.distance} for e in self.entries
            ],
            "errors": [
                {"source": e.source, "reason": e.reason} for e in self.errors
            ],
        }


def check_measure(measure: str) -> None:
    if measure in RESERVED_MEASURES:
        raise ValueError(
            f"measure {measure!r} is reserved for future extension and not implemented"
        )
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")


def rank_sources(
    target: LabeledDataset,
    candidates: list[LabeledDataset],
    measure: str,
    window: int = DEFAULT_WINDOW,
    k: int = DEFAULT_TOP_K,
) -> SourceRanking:
    """Rank every candidate by its distance to ``target`` under ``measure``.

    Shapelet sets (or DBA prototypes) are computed once per dataset. Entries
    are sorted ascending by distance with ties broken by source name.
    """
    check_measure(measure)
    if not candidates:
        raise ValueError("candidates must be non-empty")
    names = [c.name for c in candidates]
    if len(set(names)) != len(names):
        raise ValueError("candidate names must be distinct")
    if target.name in names:
        raise ValueError("target must not appear among the candidates")

    entries: list[RankEntry] = []
    failures: list[RankFailure] = []
    if measure in ("avg_shapelet", "min_shapelet"):
        dist_fn = (
            avg_shapelet_distance if measure == "avg_shapelet" else min_shapelet_distance
        )
        target_set = discover(target, window, k)
        for cand in candidates:
            try:
                cand_set = discover(cand, window, k)
                value = dist_fn(cand_set, target_set).value
            except ValueError as exc:
                failures.append(RankFailure(source=cand.name, reason=str(exc)))
                continue
            entries.append(RankEntry(source=cand.name, distance=value))
    else:
        target_protos = class_prototypes(target)
        for cand in candidates:
            try:
                resampled = resample_dataset(cand, target.length)
                value = min_prototype_dtw(class_prototypes(resampled), target_protos)
            except ValueError as exc:
                failures.append(RankFailure(source=cand.name, reason=str(exc)))
                continue
            entries.append(RankEntry(source=cand.name, distance=value))

    entries.sort(key=lambda e: (e.distance, e.source))
    return SourceRanking(
        target=target.name,
        measure=measure,
        window=window,
        k=k,
        entries=tuple(entries),
        errors=tuple(failures),
    )


def pairwise_distance(
    source: LabeledDataset,
    target: LabeledDataset,
    measure: str,
    window: int = DEFAULT_WINDOW,
    k: int = DEFAULT_TOP_K,
):
    """Distance between one source and one target under ``measure``."""
    check_measure(measure)
    if measure == "dba_dtw":
        from .distances import dba_dtw_distance

        return dba_dtw_distance(resample_dataset(source, target.length), target)
    dist_fn = (
        avg_shapelet_distance if measure == "avg_shapelet" else min_shapelet_distance
    )
    return dist_fn(discover(source, window, k), discover(target, window, k))


@dataclass(frozen=True)
class SourceManifestEntry:
    name: str
    original_size: int
    balanced_size: int
    class_count: int
    label_offset: int


@dataclass(frozen=True)
class SuperDatasetManifest:
    """Everything needed to decode and reproduce a merged super dataset."""

    target: str
    target_length: int
    sources: tuple[SourceManifestEntry, ...]
    total_classes: int
    total_series: int
    resample_params: dict[str, ResampleSpec]
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "target_length": self.target_length,
            "sources": [
                {
                    "name": s.name,
                    "original_size": s.original_size,
                    "balanced_size": s.balanced_size,
                    "class_count": s.class_count,
                    "label_offset": s.label_offset,
                }
                for s in self.sources
            ],
            "total_classes": self.total_classes,
            "total_series": self.total_series,
            "resample_params": {
                name: {
                    "target_length": spec.target_length,
                    "sigma": spec.smoothing_sigma,
                }
                for name, spec in self.resample_params.items()
            },
            "seed": self.seed,
        }

    def decode_label(self, merged_label: int) -> tuple[str, int]:
        """Map a merged label back to its (source name, local class) pair."""
        for entry in reversed(self.sources):
            if merged_label >= entry.label_offset:
                local = merged_label - entry.label_offset
                if local >= entry.class_count:
                    break
                return entry.name, local
        raise ValueError(f"merged label {merged_label} is out of range")


MANIFEST_SCHEMA = {
    "type": "object",
    "required": [
        "target",
        "target_length",
        "sources",
        "total_classes",
        "total_series",
        "resample_params",
        "seed",
    ],
    "additionalProperties": False,
    "properties": {
        "target": {"type": "string"},
        "target_length": {"type": "integer", "minimum": 2},
        "sources": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": [
                    "name",
                    "original_size",
                    "balanced_size",
                    "class_count",
                    "label_offset",
                ],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "original_size": {"type": "integer", "minimum": 1},
                    "balanced_size": {"type": "integer", "minimum": 1},
                    "class_count": {"type": "integer", "minimum": 1},
                    "label_offset": {"type": "integer", "minimum": 0},
                },
            },
        },
        "total_classes": {"type": "integer", "minimum": 1},
        "total_series": {"type": "integer", "minimum": 1},
        "resample_params": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["target_length", "sigma"],
                "additionalProperties": False,
                "properties": {
                    "target_length": {"type": "integer", "minimum": 2},
                    "sigma": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
        "seed": {"type": "integer"},
    },
}


def balanced_class_counts(counts: list[int], quota: int) -> list[int]:
    """Split ``quota`` across classes proportionally to ``counts``.

    Largest-remainder rounding in exact integer arithmetic; remainder ties
    break toward the smaller class id. Every count is at least its original
    value whenever quota >= sum(counts).
    """
    total = sum(counts)
    if total == 0 or quota < 0:
        raise ValueError("counts must be non-empty and quota non-negative")
    base = [(quota * c) // total for c in counts]
    remainders = [quota * c - b * total for c, b in zip(counts, base)]
    deficit = quota - sum(base)
    order = sorted(range(len(counts)), key=lambda i: (-remainders[i], i))
    for i in order[:deficit]:
        base[i] += 1
    return base


def _oversample_rows(ds: LabeledDataset, quota: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows of ``ds`` plus deterministic per-class copies up to ``quota`` series.

    Original rows come first in file order; the copies follow grouped by
    class (ascending), cycling each class's row indices 0, 1, 2, ...
    """
    counts = [int(ds.class_indices(c).size) for c in ds.classes]
    targets = balanced_class_counts(counts, quota)
    rows = [ds.values]
    labels = [ds.labels]
    for c, count, goal in zip(ds.classes, counts, targets):
        extra = goal - count
        if extra <= 0:
            continue
        idx = ds.class_indices(c)
        picks = idx[np.arange(extra) % count]
        rows.append(ds.values[picks])
        labels.append(np.full(extra, c, dtype=np.int64))
    return np.concatenate(rows, axis=0), np.concatenate(labels)


def build_super_dataset(
    target: LabeledDataset,
    selected: list[LabeledDataset],
    seed: int = 0,
) -> tuple[SuperDatasetManifest, LabeledDataset]:
    """Merge ``selected`` sources into one balanced, label-offset super dataset.

    Every source is resampled to the target length, oversampled to the
    maximum selected source size with class ratios preserved by
    largest-remainder rounding, and its labels shifted by a per-source
    offset so the merged label space is 0..total_classes-1. The build is
    fully deterministic; ``seed`` is recorded for a future randomized
    oversampling mode.
    """
    if not selected:
        raise ValueError("selected sources must be non-empty")
    names = [s.name for s in selected]
    if len(set(names)) != len(names):
        raise ValueError("selected source names must be distinct")

    quota = max(s.n_series for s in selected)
    entries: list[SourceManifestEntry] = []
    resample_params: dict[str, ResampleSpec] = {}
    merged_rows = []
    merged_labels = []
    offset = 0
    for src in selected:
        spec = resample_spec_for(src.length, target.length)
        resampled = resample_dataset(src, target.length)
        rows, labels = _oversample_rows(resampled, quota)
        merged_rows.append(rows)
        merged_labels.append(labels + offset)
        entries.append(
            SourceManifestEntry(
                name=src.name,
                original_size=src.n_series,
                balanced_size=quota,
                class_count=len(src.classes),
                label_offset=offset,
            )
        )
        resample_params[src.name] = spec
        offset += len(src.classes)

    merged = LabeledDataset(
        name=f"{target.name}_super",
        values=np.concatenate(merged_rows, axis=0),
        labels=np.concatenate(merged_labels),
        raw_label_map={str(g): g for g in range(offset)},
    )
    manifest = SuperDatasetManifest(
        target=target.name,
        target_length=target.length,
        sources=tuple(entries),
        total_classes=offset,
        total_series=quota * len(selected),
        resample_params=resample_params,
        seed=seed,
    )
    return manifest, merged


def write_super_dataset(
    manifest: SuperDatasetManifest,
    merged: LabeledDataset,
    out_dir: str | Path,
) -> tuple[Path, Path]:
    """Emit ``manifest.json`` and ``super.tsv`` under ``out_dir``; byte-deterministic."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / "manifest.json"
    tsv_path = out_dir / "super.tsv"
    manifest_path.write_text(json.dumps(manifest.to_json_dict(), indent=2) + "\n")
    save_tsv(merged, tsv_path)
    return manifest_path, tsv_path
