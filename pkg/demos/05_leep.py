"""LEEP from prediction matrices: what good and bad transfer look like.

LEEP needs no dataset access, just a source model's predicted class
probabilities on the target samples. Three synthetic prediction matrices
show the score's range: perfectly informative predictions score 0, noisy
but correlated ones land in between, and label-independent predictions
score near the entropy floor.
"""

import numpy as np

from shapelet_transfer import PredictionMatrix, empirical_conditional, leep

rng = np.random.default_rng(47)
n, n_source, n_target = 200, 4, 4
labels = rng.integers(0, n_target, size=n)


def score(name, probs):
    preds = PredictionMatrix(probabilities=probs, target_labels=labels)
    value = leep(preds).value
    print(f"  {name:12s} LEEP = {value:8.4f}")
    return preds


print(f"{n} target samples, {n_source} source classes:")

# Source classes line up one-to-one with target labels.
aligned = np.full((n, n_source), 1e-6)
aligned[np.arange(n), labels] = 1.0
aligned /= aligned.sum(axis=1, keepdims=True)
score("aligned", aligned)

# Correlated but noisy: the right class gets extra mass, not all of it.
noisy = rng.dirichlet(np.ones(n_source), size=n)
noisy[np.arange(n), labels] += 1.5
noisy /= noisy.sum(axis=1, keepdims=True)
preds = score("correlated", noisy)

# Predictions carry no label information at all.
uninformative = rng.dirichlet(np.ones(n_source), size=n)
score("unrelated", uninformative)
print(f"  (floor for {n_target} uniform target classes is log(1/{n_target}) = "
      f"{np.log(1 / n_target):.4f})")

joint, marginal, conditional = empirical_conditional(preds)
print("\nempirical conditional P(target label | source class), correlated case:")
print(np.round(conditional, 3))
print("columns sum to", np.round(conditional.sum(axis=0), 6))
