"""Comparing datasets: shapelet distances vs the DBA-DTW baseline.

Three synthetic datasets: the target, a relative that shares the target's
class signatures, and a stranger made of unrelated sinusoids. Both shapelet
measures and the DBA-DTW baseline should place the relative closer.
"""

import numpy as np

from shapelet_transfer import (
    LabeledDataset,
    avg_shapelet_distance,
    dba,
    dba_dtw_distance,
    discover,
    dtw,
    min_shapelet_distance,
    resample_dataset,
)

rng = np.random.default_rng(31)
window = 10


def planted(name, signatures, length, per_class=4, noise=0.4):
    rows, labels = [], []
    for c, signature in enumerate(signatures):
        for _ in range(per_class):
            row = rng.normal(scale=noise, size=length)
            start = int(rng.integers(0, length - window))
            row[start : start + window] = signature
            rows.append(row)
            labels.append(c)
    return LabeledDataset(name=name, values=np.vstack(rows), labels=np.array(labels))


sig_a = np.concatenate([np.full(5, 3.0), np.full(5, -3.0)])
sig_b = np.sin(np.linspace(0, 3 * np.pi, window)) * 3

target = planted("target", [sig_a, sig_b], length=64)
relative = planted("relative", [sig_a + rng.normal(scale=0.1, size=window), sig_b], length=96)
stranger = LabeledDataset(
    name="stranger",
    values=np.vstack([
        np.sin(np.linspace(0, f, 80)) * 2 + rng.normal(scale=0.2, size=80)
        for f in rng.uniform(5, 40, size=8)
    ]),
    labels=np.repeat([0, 1], 4),
)

target_set = discover(target, window, k=3)
print("shapelet measures (lower = closer):")
for cand in (relative, stranger):
    cand_set = discover(cand, window, k=3)
    d_avg = avg_shapelet_distance(cand_set, target_set).value
    d_min = min_shapelet_distance(cand_set, target_set).value
    print(f"  {cand.name:9s} avg={d_avg:7.3f}  min={d_min:7.3f}")

print("\nDBA-DTW baseline (source resampled to the target length first):")
for cand in (relative, stranger):
    d = dba_dtw_distance(resample_dataset(cand, target.length), target)
    print(f"  {cand.name:9s} dba_dtw={d.value:7.3f}")

# The pieces underneath: a barycenter and a warped distance.
members = [target.values[i] for i in target.class_indices(0)]
prototype = dba(members, class_label=0)
print(f"\nclass-0 barycenter: {prototype.iterations_run} iterations, "
      f"objective trace {[round(o, 2) for o in prototype.objective_history]}")
print(f"dtw(prototype, first member) = {dtw(prototype.values, members[0]):.3f}")
print(f"dtw(prototype, prototype)    = {dtw(prototype.values, prototype.values):.3f}")
