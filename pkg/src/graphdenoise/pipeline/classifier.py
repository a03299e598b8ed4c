"""Linear max-margin classifier trained by seeded stochastic subgradient descent."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError, NonPositiveRegError, SingleClassError

__all__ = ["LinearModel", "train_classifier", "hinge_loss"]


@dataclass(frozen=True, eq=False)
class LinearModel:
    """``score(x) = x @ weights + bias`` in the original feature scale."""

    weights: np.ndarray
    bias: float

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.weights.shape[0]:
            raise DimensionMismatchError(
                f"model has {self.weights.shape[0]} features, input has {x.shape[-1]}")
        return x @ self.weights + self.bias

    def predict(self, x: np.ndarray) -> np.ndarray:
        return (self.decision_function(x) > 0).astype(np.int64)


def hinge_loss(model: LinearModel, x, labels) -> float:
    """Mean hinge loss with labels in {0, 1}."""
    y = 2.0 * np.asarray(labels, dtype=float) - 1.0
    return float(np.mean(np.maximum(0.0, 1.0 - y * model.decision_function(x))))


def train_classifier(features, labels, reg_strength: float = 0.01, epochs: int = 200,
                     seed=0) -> LinearModel:
    """Fit an L2-regularized hinge-loss linear model (Pegasos updates).

    Columns are z-scored with statistics of ``features`` (constant columns are
    only centered); a constant 1 column plays the bias and is regularized
    with the rest. Each epoch visits the samples in a fresh seeded
    permutation with step size ``1 / (reg_strength * t)``, followed by
    projection onto the ball of radius ``1 / sqrt(reg_strength)``.

    Parameters
    ----------
    features : array, shape (n_samples, n_features)
    labels : array of {0, 1}
    reg_strength : float
        L2 penalty ``lambda`` in ``lambda/2 ||w||^2 + mean hinge``.
    epochs : int
    seed : int or SeedSequence

    Returns
    -------
    LinearModel
        Weights and bias mapped back to the unstandardized features.
    """
    x = np.asarray(features, dtype=float)
    y01 = np.asarray(labels)
    if x.ndim != 2 or y01.shape != (x.shape[0],):
        raise DimensionMismatchError(f"features {x.shape} vs labels {y01.shape}")
    if not reg_strength > 0:
        raise NonPositiveRegError(f"reg_strength must be positive, got {reg_strength!r}")
    if len(set(y01.tolist())) < 2:
        raise SingleClassError("training data needs both classes")
    y = np.where(y01 == 1, 1.0, -1.0)
    n, p = x.shape

    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    z = np.hstack([(x - mu) / sd, np.ones((n, 1))])
    rows = list(z)
    sq_norms = (z * z).sum(axis=1).tolist()
    ys = y.tolist()

    lam = float(reg_strength)
    radius = 1.0 / math.sqrt(lam)
    rng = np.random.default_rng(seed)
    v = np.zeros(p + 1)
    a = 1.0          # w = a * v
    v_sq = 0.0       # ||v||^2
    t = 0
    for _ in range(int(epochs)):
        for i in rng.permutation(n).tolist():
            t += 1
            eta = 1.0 / (lam * t)
            xi = rows[i]
            dot = float(v @ xi)
            margin = ys[i] * a * dot
            shrink = 1.0 - eta * lam
            if shrink == 0.0:
                v[:] = 0.0
                a, v_sq, dot = 1.0, 0.0, 0.0
            else:
                a *= shrink
            if margin < 1.0:
                c = eta * ys[i] / a
                v_sq += 2.0 * c * dot + c * c * sq_norms[i]
                v += c * xi
            w_norm = a * math.sqrt(max(v_sq, 0.0))
            if w_norm > radius:
                a *= radius / w_norm
            if a < 1e-150:
                v *= a
                a, v_sq = 1.0, float(v @ v)
        # resync the running norm against drift
        v_sq = float(v @ v)
    w = a * v
    weights = w[:p] / sd
    bias = float(w[p] - weights @ mu)
    return LinearModel(weights, bias)
