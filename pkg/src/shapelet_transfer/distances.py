"""Dataset-to-dataset distances: shapelet-set measures and the DBA-DTW baseline.

The shapelet measures compare every (source shapelet, target shapelet) pair
across classes with raw Euclidean distance, reduced by mean (avg_shapelet) or
minimum (min_shapelet). The baseline builds one DTW barycenter per class and
takes the minimum DTW distance between any source/target prototype pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .dataset_io import LabeledDataset
from .shapelets import Shapelet, ShapeletSet

MEASURES = ("avg_shapelet", "min_shapelet", "dba_dtw")


@dataclass(frozen=True)
class DatasetDistance:
    source: str
    target: str
    measure: str
    value: float

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        if not (np.isfinite(self.value) and self.value >= 0):
            raise ValueError("distance must be finite and non-negative")

    def to_json_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "measure": self.measure,
            "value": self.value,
        }


@dataclass(frozen=True)
class DbaPrototype:
    """DTW barycenter of one class with its per-iteration objective trace."""

    class_label: int
    values: np.ndarray
    iterations_run: int
    objective: float
    objective_history: tuple[float, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def shapelet_l2(a: Shapelet, b: Shapelet) -> float:
    """L2 norm of the element-wise difference of two equal-window shapelets."""
    if a.values.size != b.values.size:
        raise ValueError("shapelet windows must match")
    return float(np.linalg.norm(a.values - b.values))


def _pair_distance_matrix(src: ShapeletSet, tgt: ShapeletSet) -> np.ndarray:
    if src.window != tgt.window:
        raise ValueError("shapelet sets have different windows")
    src_all = src.all_shapelets()
    tgt_all = tgt.all_shapelets()
    if not src_all or not tgt_all:
        raise ValueError("shapelet sets must be non-empty")
    a = np.stack([s.values for s in src_all])
    b = np.stack([s.values for s in tgt_all])
    diffs = a[:, None, :] - b[None, :, :]
    return np.sqrt((diffs * diffs).sum(axis=2))


def avg_shapelet_distance(src: ShapeletSet, tgt: ShapeletSet) -> DatasetDistance:
    """Mean shapelet-pair distance over all source/target combinations."""
    value = float(_pair_distance_matrix(src, tgt).mean())
    return DatasetDistance(
        source=src.dataset_name,
        target=tgt.dataset_name,
        measure="avg_shapelet",
        value=value,
    )


def min_shapelet_distance(src: ShapeletSet, tgt: ShapeletSet) -> DatasetDistance:
    """Distance between the most similar source/target shapelet pair."""
    value = float(_pair_distance_matrix(src, tgt).min())
    return DatasetDistance(
        source=src.dataset_name,
        target=tgt.dataset_name,
        measure="min_shapelet",
        value=value,
    )


@njit(cache=True)
def _accumulated_cost(a, b, band):  # pragma: no cover - exercised via dtw()
    n = a.shape[0]
    m = b.shape[0]
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        lo = 1
        hi = m
        if band >= 0:
            lo = max(1, i - band)
            hi = min(m, i + band)
        for j in range(lo, hi + 1):
            c = (a[i - 1] - b[j - 1]) ** 2
            best = D[i - 1, j - 1]
            if D[i - 1, j] < best:
                best = D[i - 1, j]
            if D[i, j - 1] < best:
                best = D[i, j - 1]
            D[i, j] = c + best
    return D


def dtw(a, b, band: int | None = None) -> float:
    """Dynamic time warping distance with squared local cost and full window.

    The square root of the accumulated terminal cost is returned so that
    dtw(a, a) == 0 and the units match the signal. ``band`` optionally
    constrains |i - j| to a Sakoe-Chiba radius.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("dtw inputs must be non-empty")
    D = _accumulated_cost(a, b, -1 if band is None else int(band))
    total = D[a.size, b.size]
    if not np.isfinite(total):
        raise ValueError("warping band too narrow to align the sequences")
    return float(np.sqrt(total))


def _dtw_path(D: np.ndarray) -> list[tuple[int, int]]:
    """Optimal alignment path from an accumulated cost matrix, diagonal-preferring."""
    i, j = D.shape[0] - 1, D.shape[1] - 1
    path = [(i - 1, j - 1)]
    while i > 1 or j > 1:
        moves = (D[i - 1, j - 1], D[i - 1, j], D[i, j - 1])
        step = int(np.argmin(moves))
        if step == 0:
            i, j = i - 1, j - 1
        elif step == 1:
            i = i - 1
        else:
            j = j - 1
        path.append((i - 1, j - 1))
    path.reverse()
    return path


def _total_dtw(bary: np.ndarray, members: list[np.ndarray]) -> float:
    return float(sum(dtw(bary, m) for m in members))


def medoid_index(members: list[np.ndarray]) -> int:
    """Index of the member minimizing total DTW distance to the others."""
    n = len(members)
    if n == 1:
        return 0
    totals = np.zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            d = dtw(members[i], members[j])
            totals[i] += d
            totals[j] += d
    return int(np.argmin(totals))


def _dba_update(members: list[np.ndarray], bary: np.ndarray) -> np.ndarray:
    sums = np.zeros(bary.size)
    counts = np.zeros(bary.size)
    for m in members:
        D = _accumulated_cost(bary, m, -1)
        for i, j in _dtw_path(D):
            sums[i] += m[j]
            counts[i] += 1
    return sums / counts


def dba(
    members,
    init=None,
    max_iter: int = 10,
    tol: float = 1e-6,
    class_label: int = -1,
) -> DbaPrototype:
    """DTW barycenter averaging with medoid initialization.

    Each iteration aligns every member to the current barycenter and replaces
    each barycenter element with the mean of the member elements aligned to
    it. Iteration stops at ``max_iter``, when the relative objective
    improvement falls below ``tol``, or when an update would not improve the
    objective (the update is then discarded), so the recorded objective
    sequence is non-increasing.
    """
    members = [np.asarray(m, dtype=np.float64) for m in members]
    if not members:
        raise ValueError("members must be non-empty")
    lengths = {m.size for m in members}
    if len(lengths) != 1 or 0 in lengths:
        raise ValueError("members must share one non-zero length")
    if init is None:
        init = members[medoid_index(members)]
    init = np.asarray(init, dtype=np.float64)
    if init.size != members[0].size:
        raise ValueError("init length must equal the member length")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")

    bary = init.copy()
    objectives = [_total_dtw(bary, members)]
    for _ in range(max_iter):
        candidate = _dba_update(members, bary)
        objective = _total_dtw(candidate, members)
        if objective > objectives[-1]:
            break
        bary = candidate
        objectives.append(objective)
        previous = objectives[-2]
        if previous <= 0 or (previous - objective) < tol * previous:
            break
    return DbaPrototype(
        class_label=class_label,
        values=bary,
        iterations_run=len(objectives) - 1,
        objective=objectives[-1],
        objective_history=tuple(objectives),
    )


def class_prototypes(
    ds: LabeledDataset, max_iter: int = 10, tol: float = 1e-6
) -> dict[int, DbaPrototype]:
    """One DBA prototype per class of ``ds``."""
    return {
        c: dba(
            [ds.values[i] for i in ds.class_indices(c)],
            max_iter=max_iter,
            tol=tol,
            class_label=c,
        )
        for c in ds.classes
    }


def min_prototype_dtw(
    protos_a: dict[int, DbaPrototype], protos_b: dict[int, DbaPrototype]
) -> float:
    return min(
        dtw(pa.values, pb.values)
        for pa in protos_a.values()
        for pb in protos_b.values()
    )


def dba_dtw_distance(
    src: LabeledDataset,
    tgt: LabeledDataset,
    max_iter: int = 10,
    tol: float = 1e-6,
) -> DatasetDistance:
    """Minimum DTW distance between any source and target class prototype.

    The source must already be resampled to the target's length.
    """
    if src.length != tgt.length:
        raise ValueError(
            "dataset lengths must match; resample the source to the target length first"
        )
    value = min_prototype_dtw(
        class_prototypes(src, max_iter, tol), class_prototypes(tgt, max_iter, tol)
    )
    return DatasetDistance(
        source=src.name, target=tgt.name, measure="dba_dtw", value=value
    )
