from __future__ import annotations

import numpy as np
import pytest

from shapelet_transfer import LabeledDataset


def make_dataset(rng, n_classes=2, per_class=3, length=30, name="toy"):
    """Random dataset with a different mean offset per class."""
    values = []
    labels = []
    for c in range(n_classes):
        block = rng.normal(loc=2.0 * c, scale=1.0, size=(per_class, length))
        values.append(block)
        labels.extend([c] * per_class)
    return LabeledDataset(
        name=name,
        values=np.vstack(values),
        labels=np.array(labels, dtype=np.int64),
    )


def write_tsv(path, rows):
    """Write (raw_label, values) rows in UCR tab-separated format."""
    lines = [
        "\t".join([str(label)] + [f"{v:.6f}" for v in values])
        for label, values in rows
    ]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def rng():
    return np.random.default_rng(7)
