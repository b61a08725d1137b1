"""LEEP transferability score from a source-model prediction matrix.

The score is the average log-likelihood of the target labels under the
mixture of the source model's predicted class probabilities with the
empirical conditional distribution of target labels given source classes.
No model inference happens here; predictions arrive as a matrix or CSV.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_ROW_SUM_TOL = 1e-6
_ENTRY_TOL = 1e-9
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class PredictionMatrix:
    """Per-sample source-class probabilities plus the true target labels."""

    probabilities: np.ndarray
    target_labels: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=np.float64)
        labels = np.asarray(self.target_labels, dtype=np.int64)
        if probs.ndim != 2 or probs.shape[0] == 0 or probs.shape[1] == 0:
            raise ValueError("probabilities must be a non-empty (N, C) matrix")
        if labels.shape != (probs.shape[0],):
            raise ValueError("need one target label per sample")
        if np.any(labels < 0):
            raise ValueError("target labels must be non-negative")
        if np.any(probs < -_ENTRY_TOL) or np.any(probs > 1 + _ENTRY_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        row_sums = probs.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > _ROW_SUM_TOL):
            raise ValueError("every probability row must sum to 1")
        probs.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "target_labels", labels)

    @property
    def n_samples(self) -> int:
        return self.probabilities.shape[0]

    @property
    def source_class_count(self) -> int:
        return self.probabilities.shape[1]

    @property
    def target_class_count(self) -> int:
        return int(self.target_labels.max()) + 1


@dataclass(frozen=True)
class LeepScore:
    value: float
    joint: np.ndarray
    conditional: np.ndarray


def empirical_conditional(
    preds: PredictionMatrix,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Empirical joint P(y, c), marginal P(c), and conditional P(y | c).

    The joint averages each sample's predicted class probabilities into the
    row of its target label. Source classes with zero marginal mass fall back
    to a uniform conditional column, with a warning.
    """
    n, n_source = preds.n_samples, preds.source_class_count
    n_target = preds.target_class_count
    joint = np.zeros((n_target, n_source))
    np.add.at(joint, preds.target_labels, preds.probabilities)
    joint /= n
    marginal = joint.sum(axis=0)
    conditional = np.empty_like(joint)
    zero = marginal == 0.0
    if zero.any():
        warnings.warn(
            f"{int(zero.sum())} source class(es) have zero marginal mass; "
            "using a uniform conditional for them",
            stacklevel=2,
        )
        conditional[:, zero] = 1.0 / n_target
    nonzero = ~zero
    conditional[:, nonzero] = joint[:, nonzero] / marginal[nonzero]
    return joint, marginal, conditional


def leep(preds: PredictionMatrix) -> LeepScore:
    """Average log-likelihood of each target label under the conditional mixture.

    For sample n with label y_n the mixture probability is
    sum_c P(y_n | c) * f(x_n)_c; the score is the mean of its log and is
    always <= 0 on valid inputs. A floor inside the log avoids -inf.
    """
    joint, _, conditional = empirical_conditional(preds)
    mixture = np.einsum(
        "nc,nc->n", conditional[preds.target_labels], preds.probabilities
    )
    value = float(np.mean(np.log(np.maximum(mixture, _LOG_FLOOR))))
    return LeepScore(value=value, joint=joint, conditional=conditional)


def load_prediction_csv(path: str | Path) -> PredictionMatrix:
    """Read a prediction matrix CSV with header ``label,p0,p1,...``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "label" or len(header) < 2:
            raise ValueError("prediction CSV must start with a 'label,p0,...' header")
        expected = [f"p{i}" for i in range(len(header) - 1)]
        if header[1:] != expected:
            raise ValueError("prediction CSV probability columns must be p0, p1, ...")
        labels, rows = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"line {line_no}: expected {len(header)} fields")
            labels.append(int(float(row[0])))
            rows.append([float(x) for x in row[1:]])
    if not rows:
        raise ValueError("prediction CSV has no data rows")
    return PredictionMatrix(
        probabilities=np.array(rows, dtype=np.float64),
        target_labels=np.array(labels, dtype=np.int64),
    )


def leep_report(preds: PredictionMatrix) -> dict:
    """JSON-ready LEEP report for a prediction matrix."""
    score = leep(preds)
    return {
        "value": score.value,
        "n_samples": preds.n_samples,
        "n_source_classes": preds.source_class_count,
    }
