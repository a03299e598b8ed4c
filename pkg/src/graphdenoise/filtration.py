"""Nested partition chains (filtrations) of a node set.

A :class:`Partition` stores one integer cluster label per node; a
:class:`Filtration` is a list of partitions, coarsest first, each level
refining the previous one. Level 0 is always the single-cluster partition.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyGraphError,
    InvalidPartitionError,
    SizesOutOfRangeError,
    TooFewLevelsError,
)
from .graph import Graph

__all__ = [
    "Partition",
    "Filtration",
    "multilevel_filtration",
    "random_filtration",
    "dyadic_filtration",
    "growth_constant",
    "uniformity_gaps",
]


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint cover of ``node_ids`` given by per-node cluster labels.

    Labels run over ``0..n_clusters-1`` and every label is used.
    """

    node_ids: tuple[str, ...]
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.intp)
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        if labels.ndim != 1 or len(labels) != len(self.node_ids):
            raise DimensionMismatchError(
                f"{len(labels)} labels for {len(self.node_ids)} nodes")
        if len(labels) == 0:
            raise InvalidPartitionError("partition of an empty node set")
        k = int(labels.max()) + 1
        if labels.min() < 0 or np.bincount(labels, minlength=k).min() == 0:
            raise InvalidPartitionError("cluster labels must cover 0..k-1 with no empty cluster")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_clusters)

    @property
    def clusters(self) -> list[list[str]]:
        """Member node ids per cluster, in cluster-index order."""
        out: list[list[str]] = [[] for _ in range(self.n_clusters)]
        for node, lab in zip(self.node_ids, self.labels):
            out[lab].append(node)
        return out

    def assignment(self) -> dict[str, int]:
        return dict(zip(self.node_ids, self.labels.tolist()))

    def refines(self, coarser: "Partition") -> bool:
        """True when every cluster here lies inside one cluster of ``coarser``."""
        if coarser.node_ids != self.node_ids:
            return False
        parent = np.full(self.n_clusters, -1, dtype=np.intp)
        parent[self.labels] = coarser.labels
        return bool(np.array_equal(parent[self.labels], coarser.labels))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.node_ids == other.node_ids and np.array_equal(self.labels, other.labels)

    __hash__ = None

    @classmethod
    def trivial(cls, node_ids: Sequence[str]) -> "Partition":
        return cls(tuple(node_ids), np.zeros(len(node_ids), dtype=np.intp))

    @classmethod
    def singletons(cls, node_ids: Sequence[str]) -> "Partition":
        return cls(tuple(node_ids), np.arange(len(node_ids)))

    @classmethod
    def from_clusters(cls, node_ids: Sequence[str], clusters: Sequence[Sequence[str]]) -> "Partition":
        index = {n: i for i, n in enumerate(node_ids)}
        labels = np.full(len(node_ids), -1, dtype=np.intp)
        for c, members in enumerate(clusters):
            for m in members:
                if labels[index[m]] != -1:
                    raise InvalidPartitionError(f"node {m!r} appears in two clusters")
                labels[index[m]] = c
        if (labels < 0).any():
            raise InvalidPartitionError("clusters do not cover every node")
        return cls(tuple(node_ids), labels)


@dataclass(frozen=True)
class Filtration:
    """Chain of nested partitions, coarsest (single cluster) first."""

    levels: tuple[Partition, ...]

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise TooFewLevelsError("a filtration needs at least one level")
        if levels[0].n_clusters != 1:
            raise InvalidPartitionError("level 0 must be the single-cluster partition")
        for t in range(1, len(levels)):
            if levels[t].n_clusters <= levels[t - 1].n_clusters:
                raise InvalidPartitionError(f"cluster count does not increase at level {t}")
            if not levels[t].refines(levels[t - 1]):
                raise InvalidPartitionError(f"level {t} does not refine level {t - 1}")

    @property
    def node_ids(self) -> tuple[str, ...]:
        return self.levels[0].node_ids

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def sizes(self) -> list[int]:
        """Cluster count per level."""
        return [p.n_clusters for p in self.levels]

    @property
    def T(self) -> int:
        return len(self.levels) - 1

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, t: int) -> Partition:
        return self.levels[t]

    def level_of_size(self, k: int) -> Partition:
        for p in self.levels:
            if p.n_clusters == k:
                return p
        raise KeyError(f"no level with {k} clusters (have {self.sizes})")


def _check_sizes(sizes: Sequence[int], n: int) -> list[int]:
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise SizesOutOfRangeError("no target sizes given")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise SizesOutOfRangeError(f"target sizes must be strictly ascending: {sizes}")
    if sizes[0] < 1 or sizes[-1] > n:
        raise SizesOutOfRangeError(f"target sizes must lie in [1, {n}]: {sizes}")
    return sizes


def _snapshot(node_ids, root_of: np.ndarray) -> Partition:
    # clusters are named by their smallest member, so sorting roots gives
    # cluster indices ordered by first member
    _, labels = np.unique(root_of, return_inverse=True)
    return Partition(node_ids, labels)


def _assemble(node_ids, snapshots: dict[int, Partition], sizes: list[int]) -> Filtration:
    levels = [Partition.trivial(node_ids)]
    levels += [snapshots[k] for k in sizes if k > 1]
    return Filtration(tuple(levels))


class _UnionFind:
    """Members per cluster; a cluster is named by its smallest node index."""

    def __init__(self, n: int):
        self.root_of = np.arange(n)
        self.members: dict[int, list[int]] = {i: [i] for i in range(n)}

    def merge(self, a: int, b: int) -> None:
        # a < b; b's members move into a
        moved = self.members.pop(b)
        self.root_of[moved] = a
        self.members[a].extend(moved)


def multilevel_filtration(g: Graph, target_sizes: Sequence[int]) -> Filtration:
    """Nested clusterings of ``g`` by greedy average-linkage agglomeration.

    Starting from singletons, repeatedly merge the cluster pair maximizing
    ``W(a, b) / (|a| |b|)``, where ``W`` is the total edge weight between
    them, and snapshot the partition whenever the cluster count reaches a
    target size. Ties go to the lexicographically smallest ``(a, b)`` pair of
    cluster indices (a cluster is indexed by its smallest node position).
    Pairs with no connecting edge merge only once no connected pair is
    left, smallest indices first.

    Parameters
    ----------
    g : Graph
    target_sizes : sequence of int
        Strictly ascending cluster counts in ``[1, g.n_nodes]``.

    Returns
    -------
    Filtration
        Trivial partition followed by one level per target size (a target
        of 1 coincides with level 0).
    """
    n = g.n_nodes
    if n == 0:
        raise EmptyGraphError("graph has no nodes")
    sizes = _check_sizes(target_sizes, n)
    uf = _UnionFind(n)
    size = {i: 1 for i in range(n)}
    version = {i: 0 for i in range(n)}
    nbrs: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    src, dst, w = g.edge_arrays()
    for i, j, wij in zip(src.tolist(), dst.tolist(), w.tolist()):
        nbrs[i][j] = wij
        nbrs[j][i] = wij

    heap: list[tuple[float, int, int, int, int]] = []

    def push(a: int, b: int) -> None:
        if a > b:
            a, b = b, a
        score = nbrs[a][b] / (size[a] * size[b])
        heapq.heappush(heap, (-score, a, b, version[a], version[b]))

    for i, j in zip(src.tolist(), dst.tolist()):
        push(i, j)

    snapshots: dict[int, Partition] = {}
    wanted = set(sizes)
    count = n
    if count in wanted:
        snapshots[count] = _snapshot(g.nodes, uf.root_of)
    stop = sizes[0]
    while count > stop:
        a = b = -1
        while heap:
            _, x, y, vx, vy = heapq.heappop(heap)
            if version.get(x) == vx and version.get(y) == vy:
                a, b = x, y
                break
        if a < 0:
            # no connected pair remains
            a, b = sorted(uf.members)[:2]
        uf.merge(a, b)
        size[a] += size.pop(b)
        version[a] += 1
        del version[b]
        nb = nbrs.pop(b)
        nb.pop(a, None)
        nbrs[a].pop(b, None)
        for c, wbc in nb.items():
            del nbrs[c][b]
            nbrs[a][c] = nbrs[a].get(c, 0.0) + wbc
            nbrs[c][a] = nbrs[a][c]
        for c in nbrs[a]:
            push(a, c)
        count -= 1
        if count in wanted:
            snapshots[count] = _snapshot(g.nodes, uf.root_of)
    return _assemble(g.nodes, snapshots, sizes)


def random_filtration(node_ids: Sequence[str], target_sizes: Sequence[int], seed=None) -> Filtration:
    """Nested random clusterings: merge uniformly random cluster pairs.

    Deterministic given ``seed`` (anything accepted by
    ``numpy.random.default_rng``).
    """
    node_ids = tuple(node_ids)
    n = len(node_ids)
    if n == 0:
        raise EmptyGraphError("no nodes")
    sizes = _check_sizes(target_sizes, n)
    rng = np.random.default_rng(seed)
    uf = _UnionFind(n)
    alive = list(range(n))
    snapshots: dict[int, Partition] = {}
    wanted = set(sizes)
    if n in wanted:
        snapshots[n] = _snapshot(node_ids, uf.root_of)
    for count in range(n - 1, sizes[0] - 1, -1):
        i, j = sorted(rng.choice(len(alive), size=2, replace=False).tolist())
        a, b = alive[i], alive[j]
        if a > b:
            a, b = b, a
        uf.merge(a, b)
        # keep `alive` as the list of surviving roots; b leaves
        alive.remove(b)
        if count in wanted:
            snapshots[count] = _snapshot(node_ids, uf.root_of)
    return _assemble(node_ids, snapshots, sizes)


def dyadic_filtration(T: int) -> Filtration:
    """Dyadic intervals on ``2**T`` grid nodes; level t has ``2**t`` blocks."""
    T = int(T)
    if not 0 <= T <= 20:
        raise SizesOutOfRangeError(f"T must be in [0, 20], got {T}")
    n = 2 ** T
    node_ids = tuple(str(i) for i in range(n))
    idx = np.arange(n)
    levels = [Partition(node_ids, idx >> (T - t)) for t in range(T + 1)]
    return Filtration(tuple(levels))


def growth_constant(f: Filtration) -> float:
    """Smallest ratio ``|A_{t+1}| / |A_t|`` over consecutive levels."""
    if len(f) < 2:
        raise TooFewLevelsError("growth constant needs at least two levels")
    s = f.sizes
    return min(b / a for a, b in zip(s, s[1:]))


def uniformity_gaps(f_true: np.ndarray, filt: Filtration) -> np.ndarray:
    """Successive decreases ``||f_t - f|| - ||f_{t+1} - f||`` of the noiseless bias."""
    from .averaging import cluster_average

    f_true = np.asarray(f_true, dtype=float)
    if f_true.shape != (filt.n_nodes,):
        raise DimensionMismatchError(
            f"signal has shape {f_true.shape}, filtration has {filt.n_nodes} nodes")
    bias = np.array([np.linalg.norm(cluster_average(f_true, p) - f_true) for p in filt.levels])
    return bias[:-1] - bias[1:]
