"""Weighted undirected graphs over string node ids.

Signals on a graph are plain 1-D float arrays aligned to ``Graph.nodes``.
"""
from __future__ import annotations

import io
import math
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    DuplicateIdError,
    EmptyGraphError,
    NonPositiveWeightError,
    SelfLoopError,
    ZeroVarianceColumnError,
)

__all__ = [
    "Graph",
    "load_edge_list",
    "read_edge_list",
    "all_pairs_distances",
    "coexpression_weights",
    "correlation_distances",
]


class Graph:
    """Immutable weighted undirected graph.

    Each edge is stored once as an index pair ``(i, j)`` with ``i < j``, so
    ``weight(u, v) == weight(v, u)`` holds by construction.

    Parameters
    ----------
    nodes : sequence of str
        Node ids, in the order used for every aligned array.
    edges : iterable of (str, str, float)
        Undirected weighted edges.
    """

    def __init__(self, nodes: Sequence[str], edges: Iterable[tuple[str, str, float]] = ()):
        nodes = tuple(str(n) for n in nodes)
        if not nodes:
            raise EmptyGraphError("graph has no nodes")
        index = {n: i for i, n in enumerate(nodes)}
        if len(index) != len(nodes):
            raise DuplicateIdError("node ids are not unique")
        self._nodes = nodes
        self._index = index
        weights: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            if u == v:
                raise SelfLoopError(f"self loop on node {u!r}")
            w = float(w)
            if not (w > 0) or not math.isfinite(w):
                raise NonPositiveWeightError(f"edge ({u!r}, {v!r}) has weight {w!r}")
            try:
                i, j = index[u], index[v]
            except KeyError as exc:
                raise ValueError(f"edge endpoint {exc.args[0]!r} is not a node") from None
            key = (i, j) if i < j else (j, i)
            if key in weights:
                raise DuplicateEdgeError(f"edge ({u!r}, {v!r}) listed twice")
            weights[key] = w
        keys = sorted(weights)
        self._weights = {k: weights[k] for k in keys}
        self._src = np.array([k[0] for k in keys], dtype=np.intp)
        self._dst = np.array([k[1] for k in keys], dtype=np.intp)
        self._w = np.array([weights[k] for k in keys], dtype=float)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def n_nodes(self) -> int:
        return len(self._nodes)

    @property
    def n_edges(self) -> int:
        return len(self._w)

    def index(self, node: str) -> int:
        return self._index[node]

    def __contains__(self, node) -> bool:
        return node in self._index

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    def edges(self) -> list[tuple[str, str, float]]:
        """Edges as ``(u, v, w)`` with ``u`` before ``v`` in node order."""
        return [(self._nodes[i], self._nodes[j], w) for i, j, w in zip(self._src.tolist(), self._dst.tolist(), self._w.tolist())]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Index arrays ``(i, j, w)`` with ``i < j``; copies."""
        return self._src.copy(), self._dst.copy(), self._w.copy()

    def weight(self, u: str, v: str) -> float:
        """Weight of edge ``{u, v}``; 0.0 when absent."""
        i, j = self._index[u], self._index[v]
        key = (i, j) if i < j else (j, i)
        return self._weights.get(key, 0.0)

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric sparse weight matrix in node order."""
        n = self.n_nodes
        rows = np.concatenate([self._src, self._dst])
        cols = np.concatenate([self._dst, self._src])
        vals = np.concatenate([self._w, self._w])
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def with_weights(self, weights: np.ndarray) -> "Graph":
        """Same node and edge set, new weights aligned to :meth:`edge_arrays`."""
        weights = np.asarray(weights, dtype=float)
        if weights.shape != self._w.shape:
            raise DimensionMismatchError(f"expected {self.n_edges} weights, got {weights.shape}")
        return Graph(self._nodes, zip((self._nodes[i] for i in self._src),
                                      (self._nodes[j] for j in self._dst), weights))

    def subgraph(self, nodes: Iterable[str]) -> "Graph":
        """Induced subgraph; keeps this graph's node order."""
        keep = set(nodes)
        order = [n for n in self._nodes if n in keep]
        return Graph(order, ((u, v, w) for u, v, w in self.edges() if u in keep and v in keep))

    def to_edge_list(self) -> str:
        buf = io.StringIO()
        for u, v, w in self.edges():
            buf.write(f"{u} {v} {w!r}\n")
        return buf.getvalue()


def load_edge_list(text: str | TextIO) -> Graph:
    """Parse a whitespace-separated edge list.

    Each non-blank line is ``u v`` or ``u v w``; ``#`` starts a comment and a
    missing weight defaults to 1.0. Nodes are sorted lexicographically, so
    repeated loads of the same text give identical graphs.
    """
    if not isinstance(text, str):
        text = text.read()
    edges = []
    nodes = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) == 2:
            u, v = fields
            w = 1.0
        elif len(fields) == 3:
            u, v = fields[:2]
            try:
                w = float(fields[2])
            except ValueError:
                raise NonPositiveWeightError(f"line {lineno}: bad weight {fields[2]!r}") from None
        else:
            raise ValueError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        nodes.update((u, v))
        edges.append((u, v, w))
    if not nodes:
        raise EmptyGraphError("edge list contains no nodes")
    return Graph(sorted(nodes), edges)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def all_pairs_distances(g: Graph, mode: str = "hop") -> np.ndarray:
    """Shortest-path distances between all node pairs.

    ``mode="hop"`` counts edges; ``mode="weighted"`` uses edge length
    ``1 / w`` so that stronger similarity means shorter distance.
    Disconnected pairs are ``+inf``.
    """
    if mode not in ("hop", "weighted"):
        raise ValueError(f"mode must be 'hop' or 'weighted', got {mode!r}")
    n = g.n_nodes
    if g.n_edges == 0:
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        return d
    adj = g.adjacency()
    if mode == "weighted":
        adj = adj.copy()
        adj.data = 1.0 / adj.data
        return csgraph.shortest_path(adj, method="D", directed=False)
    return csgraph.shortest_path(adj, method="D", directed=False, unweighted=True)


def correlation_distances(g: Graph, expr: np.ndarray) -> np.ndarray:
    """``1 - pearson(i, j)`` for every edge, aligned to ``g.edge_arrays()``."""
    expr = np.asarray(expr, dtype=float)
    if expr.ndim != 2 or expr.shape[1] != g.n_nodes:
        raise DimensionMismatchError(
            f"expression matrix has shape {expr.shape}, graph has {g.n_nodes} nodes")
    centered = expr - expr.mean(axis=0)
    norms = np.sqrt((centered ** 2).sum(axis=0))
    bad = np.flatnonzero(norms == 0)
    if bad.size:
        raise ZeroVarianceColumnError(
            f"{bad.size} column(s) have zero variance, first is {g.nodes[bad[0]]!r}")
    src, dst, _ = g.edge_arrays()
    rho = (centered[:, src] * centered[:, dst]).sum(axis=0) / (norms[src] * norms[dst])
    return 1.0 - np.clip(rho, -1.0, 1.0)


def coexpression_weights(g: Graph, expr: np.ndarray, sigma: float | None = None) -> Graph:
    """Reweight every edge by ``exp(-d**2 / sigma**2)`` with ``d = 1 - pearson``.

    The edge set is unchanged. ``sigma=None`` uses the median edge distance
    (falling back to 1.0 when that median is zero).
    """
    d = correlation_distances(g, expr)
    if sigma is None:
        sigma = default_sigma(d)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    w = np.exp(-(d ** 2) / sigma ** 2)
    # exp underflow would produce a zero weight and an invalid edge
    w = np.maximum(w, np.finfo(float).tiny)
    return g.with_weights(w)


def default_sigma(distances: np.ndarray) -> float:
    if len(distances) == 0:
        return 1.0
    med = float(np.median(distances))
    return med if med > 0 else 1.0
