"""Seeded Monte Carlo harnesses for the denoising error curves.

Every trial ``i`` draws its noise from its own stream,
``SeedSequence(seed, spawn_key=(i,))``, so results depend only on
``(inputs, seed)`` and never on how trials are chunked or threaded.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import gammaln

from .averaging import ErrorCurve, cluster_average, cluster_means
from .errors import (
    DimensionMismatchError,
    EmptyGridError,
    NonPositiveEpsilonError,
    TooFewPointsError,
)
from .filtration import Filtration
from .kernels import kernel_matrix, kernel_smooth, row_sq_norms

__all__ = [
    "NoiseSpec",
    "CurveVerdict",
    "trial_rng",
    "gaussian_noise",
    "chi_norm_mean",
    "profile_signal",
    "martingale_trials",
    "mc_martingale_curve",
    "expected_martingale_error_sq",
    "mc_kernel_curve",
    "lemma2_check",
    "curve_verdict",
]

_CHUNK = 500


@dataclass(frozen=True)
class NoiseSpec:
    epsilon: float
    seed: int = 0
    trials: int = 200

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")


@dataclass(frozen=True)
class CurveVerdict:
    argmin_index: int
    interior: bool
    head_decreasing: bool
    tail_increasing: bool

    def to_dict(self) -> dict:
        return asdict(self)


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(trial_index),)))


def gaussian_noise(n: int, spec: NoiseSpec, trial_index: int) -> np.ndarray:
    """``n`` iid ``N(0, epsilon**2)`` draws for one trial."""
    if not 0 <= trial_index < spec.trials:
        raise IndexError(f"trial_index {trial_index} outside [0, {spec.trials})")
    return spec.epsilon * trial_rng(spec.seed, trial_index).standard_normal(n)


def _noise_block(n: int, spec: NoiseSpec, start: int, stop: int) -> np.ndarray:
    return np.stack([spec.epsilon * trial_rng(spec.seed, i).standard_normal(n)
                     for i in range(start, stop)])


def _map_chunks(fn, trials: int, threads: int) -> list:
    bounds = [(s, min(s + _CHUNK, trials)) for s in range(0, trials, _CHUNK)]
    if threads <= 1 or len(bounds) == 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves submission order, so the reduction order is fixed
        return list(pool.map(lambda ab: fn(*ab), bounds))


def chi_norm_mean(k: int) -> float:
    """Mean of a chi variable with ``k`` degrees of freedom.

    ``sqrt(2) * Gamma((k+1)/2) / Gamma(k/2)``, evaluated in log space.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k!r}")
    if k > 10**6:
        return math.sqrt(k) - 1.0 / (4.0 * math.sqrt(k))
    return math.exp(0.5 * math.log(2.0) + gammaln((k + 1) / 2.0) - gammaln(k / 2.0))


def profile_signal(name: str, n: int) -> np.ndarray:
    """Test profiles sampled at the midpoints ``(i + 0.5) / n`` of ``[0, 1]``.

    ``sin`` is ``sin(2 pi q)``, ``step`` jumps from 0 to 1 at ``q = 1/3``
    (deliberately off the dyadic grid), ``constant`` is all ones.
    """
    q = (np.arange(n) + 0.5) / n
    if name == "sin":
        return np.sin(2 * np.pi * q)
    if name == "step":
        return (q >= 1.0 / 3.0).astype(float)
    if name == "constant":
        return np.ones(n)
    raise ValueError(f"unknown profile {name!r}")


def martingale_trials(f_true: np.ndarray, filt: Filtration, spec: NoiseSpec,
                      threads: int = 1) -> dict[str, np.ndarray]:
    """Per-trial squared quantities, each of shape ``(trials, levels)``.

    ``error_sq`` is ``||f - E(f + eta | t)||**2`` computed directly;
    ``bias_sq`` is ``||E(f | t) - f||**2`` (same for every trial) and
    ``noise_sq`` is ``||E(eta | t)||**2``. Counting-measure norms.
    """
    f_true = np.asarray(f_true, dtype=float)
    n = filt.n_nodes
    if f_true.shape != (n,):
        raise DimensionMismatchError(f"signal has shape {f_true.shape}, filtration has {n} nodes")
    bias_vec = [cluster_average(f_true, p) - f_true for p in filt.levels]

    def run(start, stop):
        eta = _noise_block(n, spec, start, stop)
        err = np.empty((stop - start, len(filt)))
        noise = np.empty_like(err)
        for t, p in enumerate(filt.levels):
            m = cluster_means(eta, p)
            noise[:, t] = (m * m) @ p.sizes
            diff = bias_vec[t] + m[:, p.labels]
            err[:, t] = np.einsum("ij,ij->i", diff, diff)
        return err, noise

    parts = _map_chunks(run, spec.trials, threads)
    err = np.concatenate([p[0] for p in parts])
    noise = np.concatenate([p[1] for p in parts])
    bias = np.array([b @ b for b in bias_vec])
    return {"error_sq": err, "noise_sq": noise, "bias_sq": np.broadcast_to(bias, err.shape)}


def _mean_se(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # shifted by the first trial: exact when all trials agree (eps = 0)
    dev = x - x[0]
    m = x[0] + dev.mean(axis=0)
    if x.shape[0] < 2:
        return m, np.zeros_like(m)
    return m, dev.std(axis=0, ddof=1) / math.sqrt(x.shape[0])


def mc_martingale_curve(f_true: np.ndarray, filt: Filtration, spec: NoiseSpec,
                        norm_scale: float = 1.0, threads: int = 1) -> ErrorCurve:
    """Monte Carlo mean and standard error of ``R(t)`` at every level.

    ``norm_scale`` multiplies every norm; ``1/sqrt(n)`` turns node sums into
    averages, emulating the L2 norm on the unit interval.
    """
    res = martingale_trials(f_true, filt, spec, threads=threads)
    r = norm_scale * np.sqrt(res["error_sq"])
    mean, se = _mean_se(r)
    return ErrorCurve(np.arange(len(filt)), mean, se, spec.trials,
                      meta={"norm_scale": float(norm_scale), "epsilon": spec.epsilon,
                            "seed": spec.seed, "cluster_counts": filt.sizes})


def expected_martingale_error_sq(f_true: np.ndarray, filt: Filtration, epsilon: float,
                                 norm_scale: float = 1.0) -> np.ndarray:
    """Exact ``E R(t)**2 = ||f_t - f||**2 + eps**2 k_t`` (times ``norm_scale**2``)."""
    f_true = np.asarray(f_true, dtype=float)
    bias = np.array([np.sum((cluster_average(f_true, p) - f_true) ** 2) for p in filt.levels])
    return norm_scale ** 2 * (bias + epsilon ** 2 * np.array(filt.sizes, dtype=float))


def mc_kernel_curve(f_true: np.ndarray, d: np.ndarray, grid, spec: NoiseSpec,
                    threads: int = 1) -> ErrorCurve:
    """Monte Carlo mean of the squared error ``||f - K_alpha(f + eta)||**2``.

    All grid points share each trial's noise draw.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise EmptyGridError("alpha grid is empty")
    f_true = np.asarray(f_true, dtype=float)
    n = f_true.shape[0]
    if np.shape(d) != (n, n):
        raise DimensionMismatchError(f"distance matrix shape {np.shape(d)} vs {n} nodes")
    kernels = [kernel_matrix(d, a) for a in grid]
    biases = [f_true - kernel_smooth(k, f_true) for k in kernels]

    def run(start, stop):
        eta = _noise_block(n, spec, start, stop)
        out = np.empty((stop - start, grid.size))
        for j, k in enumerate(kernels):
            # linearity keeps the eps = 0 case bitwise equal to the closed form
            out[:, j] = row_sq_norms(biases[j] - kernel_smooth(k, eta))
        return out

    sq = np.concatenate(_map_chunks(run, spec.trials, threads))
    mean, se = _mean_se(sq)
    return ErrorCurve(grid, mean, se, spec.trials,
                      meta={"epsilon": spec.epsilon, "seed": spec.seed, "kind": "squared_error"})


def lemma2_check(filt: Filtration, spec: NoiseSpec, threads: int = 1) -> list[dict]:
    """Compare the mean of ``||eta_t|| / eps`` with the chi mean at every level.

    Returns one row per level with keys ``t, k_t, empirical, predicted,
    std_error, z_score, variance`` (``variance`` is the sample variance of
    ``||eta_t|| / eps``, which tends to 1/2 for many clusters).
    """
    if not spec.epsilon > 0:
        raise NonPositiveEpsilonError("epsilon must be positive to normalize the noise norm")
    n = filt.n_nodes

    def run(start, stop):
        eta = _noise_block(n, spec, start, stop) / spec.epsilon
        out = np.empty((stop - start, len(filt)))
        for t, p in enumerate(filt.levels):
            m = cluster_means(eta, p)
            out[:, t] = np.sqrt((m * m) @ p.sizes)
        return out

    ratios = np.concatenate(_map_chunks(run, spec.trials, threads))
    mean, se = _mean_se(ratios)
    var = ratios.var(axis=0, ddof=1) if spec.trials > 1 else np.zeros(len(filt))
    rows = []
    for t, k in enumerate(filt.sizes):
        pred = chi_norm_mean(k)
        z = (mean[t] - pred) / se[t] if se[t] > 0 else 0.0
        rows.append({"t": t, "k_t": k, "empirical": float(mean[t]), "predicted": pred,
                     "std_error": float(se[t]), "z_score": float(z), "variance": float(var[t])})
    return rows


def curve_verdict(c: ErrorCurve) -> CurveVerdict:
    """Locate the minimum of a curve and classify its shape."""
    e = c.mean_error
    if len(e) < 3:
        raise TooFewPointsError(f"need at least 3 curve points, got {len(e)}")
    i = int(np.argmin(e))
    return CurveVerdict(
        argmin_index=i,
        interior=0 < i < len(e) - 1,
        head_decreasing=bool(e[1] < e[0]),
        tail_increasing=bool(e[-1] > e[-2]),
    )
