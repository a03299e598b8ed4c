"""Row-stochastic Gaussian smoothing kernels on graph distances."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .averaging import ErrorCurve
from .errors import DimensionMismatchError, EmptyGridError, NonPositiveAlphaError

__all__ = [
    "KernelMatrix",
    "kernel_matrix",
    "kernel_smooth",
    "expected_error_sq",
    "optimal_alpha",
    "default_alpha_grid",
]


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Smoothing operator at bandwidth ``alpha``; rows sum to one."""

    values: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def kernel_matrix(d: np.ndarray, alpha: float) -> KernelMatrix:
    """Row-normalized ``exp(-d**2 / (2 alpha**2))``.

    Infinite distances get zero weight; the diagonal term is 1 before
    normalization so every row sum is positive.
    """
    if not alpha > 0:
        raise NonPositiveAlphaError(f"alpha must be positive, got {alpha!r}")
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatchError(f"distance matrix must be square, got {d.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        u = np.exp(-(d * d) / (2.0 * alpha * alpha))
    u[~np.isfinite(d)] = 0.0
    k = u / u.sum(axis=1, keepdims=True)
    return KernelMatrix(k, float(alpha))


def kernel_smooth(k: KernelMatrix, s: np.ndarray) -> np.ndarray:
    """``out[q] = sum_r K(q, r) s[r]``; also accepts a trials-by-node matrix."""
    s = np.asarray(s, dtype=float)
    if s.shape[-1] != k.n:
        raise DimensionMismatchError(f"signal has {s.shape[-1]} nodes, kernel has {k.n}")
    return s @ k.values.T


def expected_error_sq(f_true: np.ndarray, k: KernelMatrix, epsilon: float) -> float:
    """Exact ``E||f - K(f + eps g)||**2`` for standard Gaussian ``g``.

    Equals the squared bias ``||f - K f||**2`` plus ``eps**2`` times the sum of
    squared kernel entries.
    """
    f_true = np.asarray(f_true, dtype=float)
    if f_true.shape != (k.n,):
        raise DimensionMismatchError(f"signal has shape {f_true.shape}, kernel has {k.n} nodes")
    bias = (f_true - kernel_smooth(k, f_true))[None, :]
    return float(row_sq_norms(bias)[0] + epsilon ** 2 * np.sum(k.values ** 2))


def row_sq_norms(x: np.ndarray) -> np.ndarray:
    """Squared Euclidean norm of each row; shared so bias-only paths agree bitwise."""
    return np.einsum("ij,ij->i", x, x)


def default_alpha_grid(d: np.ndarray, num: int = 50) -> np.ndarray:
    """Log grid from 0.05 x smallest positive to 5 x largest finite distance."""
    d = np.asarray(d, dtype=float)
    finite = d[np.isfinite(d) & (d > 0)]
    if finite.size == 0:
        raise EmptyGridError("graph has no finite positive distances")
    return np.geomspace(0.05 * finite.min(), 5.0 * finite.max(), num)


def optimal_alpha(f_true: np.ndarray, d: np.ndarray, epsilon: float,
                  grid=None) -> tuple[float, ErrorCurve]:
    """Grid minimizer of the closed-form expected error.

    Returns ``(alpha_star, curve)`` where the curve holds the root expected
    squared error at each grid point. Ties resolve to the smallest alpha.
    """
    grid = default_alpha_grid(d) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise EmptyGridError("alpha grid is empty")
    err = np.array([expected_error_sq(f_true, kernel_matrix(d, a), epsilon) for a in grid])
    curve = ErrorCurve(grid, np.sqrt(err), np.zeros(grid.size), trials=0,
                       meta={"epsilon": float(epsilon), "kind": "closed_form"})
    return float(grid[int(np.argmin(err))]), curve
