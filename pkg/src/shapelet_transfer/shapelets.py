"""Discovery of class-discriminative shapelet candidates from profile differences.

For each class, the profile of its concatenated series against the other
classes is compared with its self-join profile; positions where the gap is
largest mark subsequences that recur within the class but appear nowhere
else, and the top-k non-overlapping ones become the class's shapelets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset_io import LabeledDataset
from .matrix_profile import (
    ConcatenatedClassSeries,
    MatrixProfile,
    cross_class_profiles,
)


@dataclass(frozen=True)
class Shapelet:
    """A window-length subsequence scored by how discriminative it is for its class."""

    values: np.ndarray
    class_label: int
    dataset_name: str
    position: int
    score: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if not np.isfinite(self.score):
            raise ValueError("shapelet score must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class ShapeletSet:
    """Top candidates per class, each class list in descending score order."""

    dataset_name: str
    window: int
    per_class: dict[int, tuple[Shapelet, ...]]

    def __post_init__(self):
        for label, shapelets in self.per_class.items():
            if not shapelets:
                raise ValueError(f"class {label} has no shapelets")
            for s in shapelets:
                if s.values.size != self.window:
                    raise ValueError("shapelet length must equal the set window")

    def all_shapelets(self) -> list[Shapelet]:
        """Every shapelet, ordered by class label then rank."""
        out = []
        for label in sorted(self.per_class):
            out.extend(self.per_class[label])
        return out


def difference_profile(other: MatrixProfile, own: MatrixProfile) -> np.ndarray:
    """Element-wise ``other - own`` distances; invalid positions carry -inf.

    Positions where neither profile has a finite distance (possible only in
    degenerate self-joins with no admissible neighbor) also map to -inf so
    they are never selected.
    """
    if other.window != own.window:
        raise ValueError("profiles have different windows")
    if len(other.distances) != len(own.distances) or not np.array_equal(
        other.mask, own.mask
    ):
        raise ValueError("profiles have different valid-position masks")
    out = np.full(len(other.distances), -np.inf)
    valid = ~other.mask
    with np.errstate(invalid="ignore"):
        diff = other.distances[valid] - own.distances[valid]
    diff[np.isnan(diff)] = -np.inf
    out[valid] = diff
    return out


def select_top_positions(scores: np.ndarray, window: int, k: int) -> list[int]:
    """Greedy top-k selection in descending score order with non-overlap suppression.

    Ties break toward the smaller position; positions within window-1 of an
    already selected one are skipped, as are non-finite scores.
    """
    finite = np.flatnonzero(np.isfinite(scores))
    order = sorted(finite, key=lambda p: (-scores[p], p))
    selected: list[int] = []
    for p in order:
        if len(selected) >= k:
            break
        if all(abs(int(p) - s) >= window for s in selected):
            selected.append(int(p))
    return selected


def discover(
    ds: LabeledDataset,
    window: int,
    k: int,
    metric: str = "l2",
    z_normalize: bool = False,
) -> ShapeletSet:
    """Extract up to ``k`` discriminative shapelets per class of ``ds``.

    Runs one-vs-all profile differences per class and keeps the highest
    non-overlapping peaks. Deterministic for fixed input; returns fewer than
    ``k`` candidates for a class only when no more non-overlapping positions
    exist.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(ds.classes) < 2:
        raise ValueError("shapelet discovery needs at least 2 classes")
    if window > ds.length:
        raise ValueError(
            f"window {window} exceeds the dataset series length {ds.length}"
        )

    per_class: dict[int, ConcatenatedClassSeries] = {}
    for c in ds.classes:
        try:
            per_class[c] = ConcatenatedClassSeries.from_dataset(ds, c, window)
        except ValueError as exc:
            raise ValueError(f"class {c}: {exc}") from exc

    result: dict[int, tuple[Shapelet, ...]] = {}
    for c in ds.classes:
        own, other = cross_class_profiles(
            per_class, c, metric=metric, z_normalize=z_normalize
        )
        diff = difference_profile(other, own)
        positions = select_top_positions(diff, window, k)
        if not positions:
            raise ValueError(f"class {c}: no scoreable shapelet candidates")
        series = per_class[c].values
        result[c] = tuple(
            Shapelet(
                values=series[p : p + window].copy(),
                class_label=c,
                dataset_name=ds.name,
                position=p,
                score=float(diff[p]),
            )
            for p in positions
        )
    return ShapeletSet(dataset_name=ds.name, window=window, per_class=result)


def shapelet_set_to_json_dict(ss: ShapeletSet) -> dict:
    return {
        "dataset": ss.dataset_name,
        "window": ss.window,
        "classes": [
            {
                "label": label,
                "shapelets": [
                    {
                        "position": s.position,
                        "score": s.score,
                        "values": [float(v) for v in s.values],
                    }
                    for s in ss.per_class[label]
                ],
            }
            for label in sorted(ss.per_class)
        ],
    }


def shapelet_set_from_json_dict(data: dict) -> ShapeletSet:
    per_class = {
        int(entry["label"]): tuple(
            Shapelet(
                values=np.array(s["values"], dtype=np.float64),
                class_label=int(entry["label"]),
                dataset_name=data["dataset"],
                position=int(s["position"]),
                score=float(s["score"]),
            )
            for s in entry["shapelets"]
        )
        for entry in data["classes"]
    }
    return ShapeletSet(
        dataset_name=data["dataset"], window=int(data["window"]), per_class=per_class
    )


def save_shapelet_set(ss: ShapeletSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(shapelet_set_to_json_dict(ss), indent=2) + "\n")


def load_shapelet_set(path: str | Path) -> ShapeletSet:
    return shapelet_set_from_json_dict(json.loads(Path(path).read_text()))
