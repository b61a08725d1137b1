"""Self-join and AB-join matrix profiles over concatenated per-class series.

Distances between subsequences are raw (non-normalized) Euclidean by default,
with z-normalized and L1 variants behind flags. Subsequences that would span
two concatenated recordings are masked out of both the query and reference
sides, and self-joins exclude a one-window zone around each query position so
trivial self-matches never win.

The optimized kernel keeps a rolling dot-product vector per query row;
``brute_force_join`` computes every row directly from the definition and
stays in-tree as the correctness reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_ZNORM_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class ConcatenatedClassSeries:
    """All series of one class joined end to end.

    ``boundaries`` holds the start offset of each original series inside
    ``values``; the last segment ends at ``len(values)``. Segments shorter
    than ``window`` are dropped at construction and their positions (in the
    input segment order) recorded in ``dropped``.
    """

    values: np.ndarray
    boundaries: tuple[int, ...]
    window: int
    dropped: tuple[int, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if self.window < 1:
            raise ValueError("window must be a positive integer")
        if not self.boundaries or self.boundaries[0] != 0:
            raise ValueError("boundaries must start at 0")
        ends = list(self.boundaries[1:]) + [values.size]
        for start, end in zip(self.boundaries, ends):
            if end <= start:
                raise ValueError("boundaries must be strictly increasing")
            if end - start < self.window:
                raise ValueError("every segment must be at least window long")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))

    @classmethod
    def from_segments(cls, segments, window: int) -> "ConcatenatedClassSeries":
        """Concatenate ``segments``, dropping (and recording) those shorter than ``window``."""
        kept, dropped = [], []
        for i, seg in enumerate(segments):
            seg = np.asarray(seg, dtype=np.float64)
            if seg.size < window:
                dropped.append(i)
            else:
                kept.append(seg)
        if not kept:
            raise ValueError("no segment admits a window-length subsequence")
        boundaries, offset = [], 0
        for seg in kept:
            boundaries.append(offset)
            offset += seg.size
        return cls(
            values=np.concatenate(kept),
            boundaries=tuple(boundaries),
            window=window,
            dropped=tuple(dropped),
        )

    @classmethod
    def from_dataset(cls, ds, label: int, window: int) -> "ConcatenatedClassSeries":
        """Concatenation of all series of class ``label`` in dataset order."""
        idx = ds.class_indices(label)
        if idx.size == 0:
            raise ValueError(f"dataset has no series with label {label}")
        return cls.from_segments([ds.values[i] for i in idx], window)

    @property
    def n_positions(self) -> int:
        """Total subsequence start positions, valid or not."""
        return self.values.size - self.window + 1

    def segment_spans(self) -> list[tuple[int, int]]:
        ends = list(self.boundaries[1:]) + [self.values.size]
        return list(zip(self.boundaries, ends))

    def valid_positions_mask(self) -> np.ndarray:
        """Boolean array over start positions; True where [r, r+window) stays in one segment."""
        valid = np.zeros(self.n_positions, dtype=bool)
        for start, end in self.segment_spans():
            valid[start : end - self.window + 1] = True
        return valid


@dataclass(frozen=True)
class MatrixProfile:
    """Nearest-neighbor distances of every query subsequence into a reference.

    Arrays are indexed by query start position. ``mask`` is True at invalid
    (boundary-spanning) positions, which carry the sentinel pair
    (+inf distance, -1 index). ``nn_index`` may also be -1 at a valid
    position when the self-join exclusion zone leaves no admissible
    neighbor, which only happens in degenerate single-subsequence classes.
    """

    distances: np.ndarray
    nn_index: np.ndarray
    window: int
    mask: np.ndarray

    def __post_init__(self):
        if not (len(self.distances) == len(self.nn_index) == len(self.mask)):
            raise ValueError("profile arrays must have equal length")

    def to_json_dict(self) -> dict:
        """JSON-safe dump; non-finite distances become null."""
        return {
            "window": self.window,
            "distances": [
                float(d) if np.isfinite(d) else None for d in self.distances
            ],
            "nn_index": [int(i) for i in self.nn_index],
            "mask": [bool(m) for m in self.mask],
        }


def subsequences(series: ConcatenatedClassSeries) -> np.ndarray:
    """Start positions of all window-length subsequences that stay within one segment."""
    return np.flatnonzero(series.valid_positions_mask())


def _window_sq_sums(values: np.ndarray, window: int) -> np.ndarray:
    csum = np.concatenate(([0.0], np.cumsum(values * values)))
    return csum[window:] - csum[:-window]


def _znorm_windows(windows: np.ndarray) -> np.ndarray:
    means = windows.mean(axis=1, keepdims=True)
    stds = windows.std(axis=1, keepdims=True)
    centered = windows - means
    out = np.where(stds > _ZNORM_STD_FLOOR, centered / np.maximum(stds, _ZNORM_STD_FLOOR), 0.0)
    return out


def _definition_distances(
    query_window: np.ndarray, reference_windows: np.ndarray, metric: str
) -> np.ndarray:
    diffs = reference_windows - query_window
    if metric == "l2":
        return np.sqrt((diffs * diffs).sum(axis=1))
    if metric == "l1":
        return np.abs(diffs).sum(axis=1)
    raise ValueError(f"unknown metric {metric!r}")


def _check_join_inputs(query, reference, self_join):
    if query.window != reference.window:
        raise ValueError("query and reference windows must match")
    if self_join and query is not reference:
        raise ValueError("self_join requires query and reference to be the same object")
    if not query.valid_positions_mask().any() or not reference.valid_positions_mask().any():
        raise ValueError("both sides need at least one valid subsequence")


def brute_force_join(
    query: ConcatenatedClassSeries,
    reference: ConcatenatedClassSeries,
    self_join: bool = False,
    metric: str = "l2",
    z_normalize: bool = False,
) -> MatrixProfile:
    """Reference implementation: evaluate every subsequence pair from the definition."""
    _check_join_inputs(query, reference, self_join)
    w = query.window
    q_valid = query.valid_positions_mask()
    r_valid = reference.valid_positions_mask()

    q_windows = sliding_window_view(query.values, w)
    r_windows = sliding_window_view(reference.values, w)
    if z_normalize:
        q_windows = _znorm_windows(q_windows)
        r_windows = _znorm_windows(r_windows)

    nq, nr = q_valid.size, r_valid.size
    distances = np.full(nq, np.inf)
    nn_index = np.full(nq, -1, dtype=np.int64)
    for r in range(nq):
        if not q_valid[r]:
            continue
        row = _definition_distances(q_windows[r], r_windows, metric)
        row[~r_valid] = np.inf
        if self_join:
            row[max(0, r - w + 1) : min(nr, r + w)] = np.inf
        best = int(np.argmin(row))
        if np.isfinite(row[best]):
            distances[r] = row[best]
            nn_index[r] = best
    return MatrixProfile(distances=distances, nn_index=nn_index, window=w, mask=~q_valid)


def _fast_raw_l2_join(query, reference, self_join):
    w = query.window
    q, ref = query.values, reference.values
    q_valid = query.valid_positions_mask()
    r_valid = reference.valid_positions_mask()
    nq, nr = q_valid.size, r_valid.size

    ssq_q = _window_sq_sums(q, w)
    ssq_r = _window_sq_sums(ref, w)
    ref_penalty = np.where(r_valid, 0.0, np.inf)

    distances = np.full(nq, np.inf)
    nn_index = np.full(nq, -1, dtype=np.int64)
    dot = np.empty(nr)
    prev = np.empty(nr)
    for r in range(nq):
        if r == 0:
            dot[:] = np.correlate(ref, q[:w], mode="valid")
        else:
            prev, dot = dot, prev
            dot[1:] = prev[:-1] - q[r - 1] * ref[: nr - 1] + q[r + w - 1] * ref[w : w + nr - 1]
            dot[0] = q[r : r + w] @ ref[:w]
        if not q_valid[r]:
            continue
        d2 = np.maximum(ssq_q[r] + ssq_r - 2.0 * dot, 0.0)
        row = np.sqrt(d2) + ref_penalty
        if self_join:
            row[max(0, r - w + 1) : min(nr, r + w)] = np.inf
        best = int(np.argmin(row))
        if np.isfinite(row[best]):
            # The rolling formula cancels catastrophically on near-identical
            # subsequences; recompute the winning pair from the definition.
            diff = q[r : r + w] - ref[best : best + w]
            distances[r] = np.sqrt(diff @ diff)
            nn_index[r] = best
    return MatrixProfile(distances=distances, nn_index=nn_index, window=w, mask=~q_valid)


def ab_join(
    query: ConcatenatedClassSeries,
    reference: ConcatenatedClassSeries,
    self_join: bool = False,
    metric: str = "l2",
    z_normalize: bool = False,
) -> MatrixProfile:
    """Matrix profile of ``query`` against ``reference``.

    For each valid query position the profile holds the minimum distance to
    any valid reference subsequence (ties broken by the smaller reference
    position). Self-joins exclude reference positions within window-1 of the
    query position. The default raw-L2 metric runs on a rolling dot-product
    kernel; the flag variants fall back to the definitional computation.
    """
    if metric not in ("l2", "l1"):
        raise ValueError(f"unknown metric {metric!r}")
    if metric == "l2" and not z_normalize:
        _check_join_inputs(query, reference, self_join)
        return _fast_raw_l2_join(query, reference, self_join)
    return brute_force_join(query, reference, self_join, metric, z_normalize)


def concatenate_rest(
    per_class: dict[int, ConcatenatedClassSeries], exclude: int
) -> ConcatenatedClassSeries:
    """Join every class but ``exclude`` into one series, keeping per-row boundaries."""
    segments = []
    window = None
    for label in sorted(per_class):
        if label == exclude:
            continue
        series = per_class[label]
        window = series.window if window is None else window
        if series.window != window:
            raise ValueError("all classes must share one window")
        segments.extend(series.values[start:end] for start, end in series.segment_spans())
    if window is None:
        raise ValueError("need at least 2 classes")
    return ConcatenatedClassSeries.from_segments(segments, window)


def cross_class_profiles(
    per_class: dict[int, ConcatenatedClassSeries],
    c: int,
    metric: str = "l2",
    z_normalize: bool = False,
) -> tuple[MatrixProfile, MatrixProfile]:
    """One-vs-all profiles for class ``c``: (self-join, AB-join against the rest)."""
    if c not in per_class:
        raise ValueError(f"class {c} not present")
    if len(per_class) < 2:
        raise ValueError("need at least 2 classes")
    own_series = per_class[c]
    rest = concatenate_rest(per_class, exclude=c)
    own = ab_join(own_series, own_series, self_join=True, metric=metric, z_normalize=z_normalize)
    other = ab_join(own_series, rest, metric=metric, z_normalize=z_normalize)
    return own, other
