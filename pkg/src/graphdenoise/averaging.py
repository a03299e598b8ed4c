"""Cluster averaging (conditional expectation) over partitions and filtrations.

Norms are plain Euclidean norms over nodes. Harnesses that emulate a
continuum interval pass ``norm_scale = 1/sqrt(n)`` where relevant.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import DimensionMismatchError
from .filtration import Filtration, Partition

__all__ = [
    "ErrorCurve",
    "cluster_means",
    "cluster_average",
    "martingale_sequence",
    "error_curve_exact",
    "reduced_features",
]


@dataclass
class ErrorCurve:
    """Reconstruction error against a regularization parameter.

    ``std_error`` is the standard error of the mean over ``trials``;
    ``trials == 0`` marks a closed-form (exact) curve. ``meta`` carries
    free-form provenance such as the norm scaling.
    """

    params: np.ndarray
    mean_error: np.ndarray
    std_error: np.ndarray
    trials: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        self.mean_error = np.asarray(self.mean_error, dtype=float)
        self.std_error = np.asarray(self.std_error, dtype=float)
        if not (self.params.shape == self.mean_error.shape == self.std_error.shape):
            raise DimensionMismatchError("params, mean_error and std_error lengths differ")
        if not (np.all(np.isfinite(self.mean_error)) and np.all(np.isfinite(self.std_error))):
            raise ValueError("error curve contains non-finite values")
        if (self.mean_error < 0).any() or (self.std_error < 0).any():
            raise ValueError("error curve values must be nonnegative")

    def __len__(self) -> int:
        return len(self.params)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "mean_error", "std_error", "trials"])
        for p, m, s in zip(self.params, self.mean_error, self.std_error):
            w.writerow([repr(float(p)), repr(float(m)), repr(float(s)), self.trials])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ErrorCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        trials = int(rows[0]["trials"]) if rows else 0
        return cls(
            params=[float(r["param"]) for r in rows],
            mean_error=[float(r["mean_error"]) for r in rows],
            std_error=[float(r["std_error"]) for r in rows],
            trials=trials,
        )


def _check(s: np.ndarray, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape[-1:] != (n,):
        raise DimensionMismatchError(f"signal has shape {s.shape}, partition has {n} nodes")
    return s


def cluster_means(s: np.ndarray, p: Partition) -> np.ndarray:
    """Per-cluster means of ``s`` (last axis over nodes) in cluster order."""
    s = _check(s, p.n_nodes)
    k = p.n_clusters
    if k == p.n_nodes:
        # singletons: a pure reordering, kept exact
        out = np.empty_like(s)
        out[..., p.labels] = s
        return out
    if s.ndim == 1:
        return np.bincount(p.labels, weights=s, minlength=k) / p.sizes
    flat = s.reshape(-1, p.n_nodes)
    indicator = sparse.csr_matrix(
        (np.ones(p.n_nodes), (np.arange(p.n_nodes), p.labels)), shape=(p.n_nodes, k))
    sums = np.asarray((indicator.T @ flat.T).T)
    return (sums / p.sizes).reshape(s.shape[:-1] + (k,))


def cluster_average(s: np.ndarray, p: Partition) -> np.ndarray:
    """Replace every value by the mean over its cluster."""
    return cluster_means(s, p)[..., p.labels]


def reduced_features(s: np.ndarray, p: Partition) -> np.ndarray:
    """One mean per cluster; works row-wise on sample-by-node matrices."""
    return cluster_means(s, p)


def martingale_sequence(s: np.ndarray, filt: Filtration) -> list[np.ndarray]:
    """Cluster averages of ``s`` at every level, coarsest first."""
    s = _check(s, filt.n_nodes)
    return [cluster_average(s, p) for p in filt.levels]


def error_curve_exact(f_true: np.ndarray, f_obs: np.ndarray, filt: Filtration,
                      norm_scale: float = 1.0) -> ErrorCurve:
    """Single-realization curve ``R(t) = ||f_true - E(f_obs | level t)||``."""
    f_true = _check(f_true, filt.n_nodes)
    f_obs = _check(f_obs, filt.n_nodes)
    r = [norm_scale * np.linalg.norm(f_true - avg) for avg in martingale_sequence(f_obs, filt)]
    t = np.arange(len(filt))
    return ErrorCurve(t, r, np.zeros(len(t)), trials=1, meta={"norm_scale": norm_scale})
