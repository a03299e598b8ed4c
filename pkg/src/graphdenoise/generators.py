"""Small seeded graph generators for experiments and tests."""
from __future__ import annotations

import numpy as np

from .graph import Graph

__all__ = ["node_names", "path_graph", "cycle_graph", "random_graph",
           "random_connected_graph", "two_community_graph"]


def node_names(n: int, prefix: str = "n") -> list[str]:
    # zero-padded so lexicographic order equals numeric order
    width = len(str(max(n - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def _graph(n: int, pairs, weights=None) -> Graph:
    names = node_names(n)
    pairs = sorted({(min(i, j), max(i, j)) for i, j in pairs if i != j})
    if weights is None:
        return Graph(names, ((names[i], names[j], 1.0) for i, j in pairs))
    return Graph(names, ((names[i], names[j], weights[k]) for k, (i, j) in enumerate(pairs)))


def path_graph(n: int) -> Graph:
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return _graph(n, [(i, (i + 1) % n) for i in range(n)])


def random_graph(n: int, out_degree: int = 4, seed=0) -> Graph:
    """Each node links to ``out_degree`` uniformly chosen others (merged as undirected)."""
    rng = np.random.default_rng(seed)
    pairs = [(i, int(j)) for i in range(n) for j in rng.choice(n, size=out_degree, replace=False)]
    return _graph(n, pairs)


def random_connected_graph(n: int, extra_edges: int = None, seed=0) -> Graph:
    """Random spanning tree plus ``extra_edges`` random chords (default ``n``)."""
    rng = np.random.default_rng(seed)
    extra = n if extra_edges is None else extra_edges
    order = rng.permutation(n)
    pairs = [(int(order[i]), int(order[rng.integers(i)])) for i in range(1, n)]
    pairs += [tuple(int(v) for v in rng.choice(n, size=2, replace=False)) for _ in range(extra)]
    return _graph(n, pairs)


def two_community_graph(n: int, p_in: float, p_out: float, seed=0) -> tuple[Graph, np.ndarray]:
    """Two-block stochastic block model; returns the graph and block labels.

    Nodes ``0..n//2-1`` form block 0, the rest block 1.
    """
    rng = np.random.default_rng(seed)
    block = (np.arange(n) >= n // 2).astype(np.intp)
    iu, ju = np.triu_indices(n, k=1)
    p = np.where(block[iu] == block[ju], p_in, p_out)
    hit = rng.random(iu.size) < p
    return _graph(n, zip(iu[hit].tolist(), ju[hit].tolist())), block
