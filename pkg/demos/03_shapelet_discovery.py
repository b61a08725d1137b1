"""One-vs-all shapelet discovery on a three-class dataset.

Each class carries its own signature pattern (a spike train, a ramp, a
square pulse) buried in noise. Discovery should hand back one shapelet per
class that looks like that class's signature.
"""

import json

import numpy as np

from shapelet_transfer import LabeledDataset, discover, shapelet_set_to_json_dict

rng = np.random.default_rng(23)
window, length, per_class = 8, 70, 4

signatures = {
    0: np.array([0, 4.0, 0, 4.0, 0, 4.0, 0, 4.0]),        # spike train
    1: np.linspace(-3.0, 3.0, 8),                          # ramp
    2: np.array([3.0, 3, 3, 3, -3, -3, -3, -3]),           # square pulse
}

rows, labels = [], []
for c, signature in signatures.items():
    for _ in range(per_class):
        row = rng.normal(scale=0.5, size=length)
        start = int(rng.integers(0, length - window))
        row[start : start + window] = signature
        rows.append(row)
        labels.append(c)

ds = LabeledDataset(name="signatures", values=np.vstack(rows), labels=np.array(labels))
shapelet_set = discover(ds, window=window, k=2)

for c in ds.classes:
    best = shapelet_set.per_class[c][0]
    print(f"class {c}: top shapelet at position {best.position}, score {best.score:.2f}")
    print(f"  signature: {np.round(signatures[c], 1).tolist()}")
    print(f"  recovered: {np.round(best.values, 1).tolist()}")

print("\nJSON dump (as emitted by the `shapelets` CLI subcommand):")
payload = shapelet_set_to_json_dict(shapelet_set)
payload["classes"] = payload["classes"][:1]  # keep the printout short
print(json.dumps(payload, indent=2)[:600], "...")
