"""The full pipeline: rank a corpus of candidate sources, then build the
balanced super dataset from the best ones.

A corpus of five candidates is written to disk in UCR format. Two of them
secretly share the target's class signatures; ranking should surface those,
and the super-dataset build merges them with disjoint label blocks and
equal contribution.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from shapelet_transfer import (
    LabeledDataset,
    build_super_dataset,
    load_ucr_tsv,
    rank_sources,
    save_tsv,
    write_super_dataset,
)

rng = np.random.default_rng(53)
window = 12


def planted(name, signatures, length, per_class, noise=0.4):
    rows, labels = [], []
    for c, signature in enumerate(signatures):
        for _ in range(per_class):
            row = rng.normal(scale=noise, size=length)
            start = int(rng.integers(0, length - window))
            row[start : start + window] = signature
            rows.append(row)
            labels.append(c)
    return LabeledDataset(name=name, values=np.vstack(rows), labels=np.array(labels))


sig_a = np.concatenate([np.full(6, 2.5), np.full(6, -2.5)])
sig_b = np.sin(np.linspace(0, 2 * np.pi, window)) * 3
other_sigs = [rng.normal(scale=2.0, size=window) for _ in range(6)]

workdir = Path(tempfile.mkdtemp(prefix="shapelet_transfer_demo_"))
corpus = workdir / "corpus"
corpus.mkdir()

target = planted("Target", [sig_a, sig_b], length=64, per_class=5)
datasets = {
    "Kin": planted("Kin", [sig_a, sig_b], length=90, per_class=4),
    "HalfKin": planted("HalfKin", [sig_a, other_sigs[0]], length=72, per_class=6),
    "NoiseA": planted("NoiseA", other_sigs[1:3], length=80, per_class=4),
    "NoiseB": planted("NoiseB", other_sigs[3:5], length=60, per_class=8),
    "NoiseC": planted("NoiseC", [other_sigs[5], other_sigs[1]], length=100, per_class=3),
}
save_tsv(target, workdir / "Target_TRAIN.tsv")
for name, ds in datasets.items():
    save_tsv(ds, corpus / f"{name}_TRAIN.tsv")

candidates = [load_ucr_tsv(p) for p in sorted(corpus.glob("*.tsv"))]
ranking = rank_sources(target, candidates, "min_shapelet", window=window, k=3)
print("ranking by minimum shapelet distance (ascending):")
for entry in ranking.entries:
    print(f"  {entry.source:8s} {entry.distance:8.4f}")

selected_names = [e.source for e in ranking.entries[:2]]
print(f"\nselecting top 2 sources: {selected_names}")
by_name = {c.name: c for c in candidates}
manifest, merged = build_super_dataset(
    target, [by_name[n] for n in selected_names], seed=0
)
manifest_path, tsv_path = write_super_dataset(manifest, merged, workdir / "super")

print(f"super dataset: {merged.n_series} series of length {merged.length}, "
      f"{manifest.total_classes} merged classes")
for src in manifest.sources:
    print(f"  {src.name}: {src.original_size} -> {src.balanced_size} series, "
          f"labels {src.label_offset}..{src.label_offset + src.class_count - 1}")
print(f"label 0 decodes to {manifest.decode_label(0)}")
print(f"\nwrote {manifest_path} and {tsv_path}")
print(json.dumps(manifest.to_json_dict(), indent=2)[:400], "...")
