"""Two-class datasets with a class difference planted on one filtration level."""
from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatchError, InvalidLevelError
from ..filtration import Filtration
from ..graph import Graph
from .dataset import Dataset

__all__ = ["synthetic_dataset"]


def synthetic_dataset(g: Graph, filt: Filtration, planted_level: int, effect: float,
                      noise: float, n_samples: int, seed=0) -> Dataset:
    """Sample a balanced two-class dataset on the nodes of ``g``.

    A random half of the clusters at ``filt[planted_level]`` carry signal:
    on each such cluster the two class means differ by ``effect / 2`` (class 1
    at ``+s * effect / 4``, class 0 at ``-s * effect / 4``, with a random sign
    ``s`` per cluster), constant across the cluster. Every entry then gets
    iid ``N(0, noise**2)`` noise. Other clusters have mean zero in both
    classes.
    """
    if not 0 <= planted_level < len(filt):
        raise InvalidLevelError(f"planted_level {planted_level} not in [0, {len(filt)})")
    if filt.node_ids != g.nodes:
        raise DimensionMismatchError("filtration is not over the graph's nodes")
    if n_samples < 4:
        raise ValueError("need at least 4 samples")
    rng = np.random.default_rng(seed)
    part = filt[planted_level]
    k = part.n_clusters
    chosen = rng.choice(k, size=max(1, k // 2), replace=False)
    signs = rng.choice([-1.0, 1.0], size=chosen.size)
    cluster_shift = np.zeros(k)
    cluster_shift[chosen] = signs * effect / 4.0
    shift = cluster_shift[part.labels]

    labels = np.zeros(n_samples, dtype=np.int64)
    labels[n_samples // 2:] = 1
    labels = rng.permutation(labels)
    means = np.where(labels[:, None] == 1, shift, -shift)
    x = means + noise * rng.standard_normal((n_samples, g.n_nodes))
    width = len(str(n_samples - 1))
    sample_ids = tuple(f"s{i:0{width}d}" for i in range(n_samples))
    return Dataset(x, labels, sample_ids, g.nodes)
