"""Repeated stratified k-fold evaluation of cluster-averaged features.

Modes
-----
``ppi``
    One graph-only filtration, built before any split.
``ppi_expr``
    Edges reweighted by co-expression of the training folds, filtration
    rebuilt for every training split.
``random``
    Random nested clustering, redrawn for every repeat.
``all_genes``
    No averaging; every node is its own feature.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..averaging import reduced_features
from ..errors import TooFewSamplesError
from ..filtration import Partition, multilevel_filtration, random_filtration
from ..graph import Graph, coexpression_weights
from .classifier import LinearModel, train_classifier
from .dataset import Dataset, align_to_graph
from .metrics import auprc, auroc

__all__ = ["MODES", "CVReport", "stratified_folds", "fit_fold", "cross_validate"]

MODES = ("ppi", "ppi_expr", "random", "all_genes")


@dataclass
class CVReport:
    mode: str
    cluster_sizes: list[int]
    folds: int
    repeats: int
    per_size: list[dict]
    config: dict = field(default_factory=dict)
    per_repeat: dict = field(default_factory=dict, repr=False)

    def row(self, k: int) -> dict:
        for r in self.per_size:
            if r["k"] == k:
                return r
        raise KeyError(k)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("per_repeat")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_table_csv(self) -> str:
        """Wide table: one column per cluster count, cells ``mean(std)``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        heads = ["all_genes" if self.mode == "all_genes" else str(r["k"]) for r in self.per_size]
        w.writerow([self.mode, *heads])
        for metric in ("auroc", "auprc"):
            w.writerow([metric.upper(), *(
                f"{r[metric + '_mean']!r}({r[metric + '_std']!r})" for r in self.per_size)])
        return buf.getvalue()


def stratified_folds(labels: np.ndarray, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Fold index per sample; each class is shuffled and dealt round-robin."""
    labels = np.asarray(labels)
    out = np.empty(len(labels), dtype=np.intp)
    offset = 0
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        perm = rng.permutation(idx)
        out[perm] = (np.arange(len(perm)) + offset) % folds
        offset += len(perm)
    return out


def _partitions(mode: str, g: Graph, train_x: np.ndarray, sizes: list[int], sigma,
                fixed: dict[int, Partition] | None) -> dict[int, Partition]:
    if mode == "all_genes":
        return {g.n_nodes: Partition.singletons(g.nodes)}
    if mode == "ppi_expr":
        gw = coexpression_weights(g, train_x, sigma)
        filt = multilevel_filtration(gw, sizes)
        return {k: filt.level_of_size(k) for k in sizes}
    return fixed


def fit_fold(d: Dataset, g: Graph, train_idx, mode: str, sizes, sigma=None, seed=0,
             reg_strength: float = 0.01, epochs: int = 200,
             fixed: dict[int, Partition] | None = None) -> dict[int, tuple[Partition, LinearModel]]:
    """Build partitions and train one model per cluster count from training rows only.

    ``d`` must already be aligned to ``g``. For ``ppi`` and ``random`` modes
    the data-independent partitions are passed in ``fixed``.
    """
    train_idx = np.asarray(train_idx)
    x_train = d.features[train_idx]
    y_train = d.labels[train_idx]
    parts = _partitions(mode, g, x_train, list(sizes), sigma, fixed)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seeds = ss.spawn(len(parts))
    out = {}
    for (k, part), s in zip(sorted(parts.items()), seeds):
        model = train_classifier(reduced_features(x_train, part), y_train,
                                 reg_strength=reg_strength, epochs=epochs, seed=s)
        out[k] = (part, model)
    return out


def cross_validate(d: Dataset, g: Graph, cluster_sizes=(64, 128, 256, 512, 1024, 2048),
                   folds: int = 5, repeats: int = 20, sigma=None, mode: str = "ppi",
                   seed: int = 0, reg_strength: float = 0.01, epochs: int = 200,
                   threads: int = 1) -> CVReport:
    """Repeated stratified cross-validation of the cluster-average pipeline.

    Each repeat draws a fresh stratified fold assignment. Test scores from
    all folds are pooled before computing AUROC and AUPRC, and the report
    gives mean and standard deviation of both over repeats. Partitions and
    feature scaling only ever see the training folds.

    Parameters
    ----------
    d : Dataset
        Raw dataset; columns not in ``g`` are dropped.
    g : Graph
    cluster_sizes : sequence of int
        Cluster counts to evaluate (ignored for ``all_genes``).
    folds, repeats : int
    sigma : float, optional
        Co-expression bandwidth for ``ppi_expr``; default is the median edge
        distance of each training split.
    mode : {"ppi", "ppi_expr", "random", "all_genes"}
    seed : int
    reg_strength, epochs : classifier settings
    threads : int
        Repeats run concurrently; output does not depend on it.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    d = align_to_graph(d, g)
    g = g.subgraph(d.node_ids)
    sizes = sorted(int(k) for k in cluster_sizes) if mode != "all_genes" else []
    counts = np.bincount(d.labels, minlength=2)
    if counts.min() < folds:
        raise TooFewSamplesError(f"class counts {counts.tolist()} below fold count {folds}")

    fixed = None
    if mode == "ppi":
        filt = multilevel_filtration(g, sizes)
        fixed = {k: filt.level_of_size(k) for k in sizes}

    def one_repeat(r: int) -> dict[int, tuple[float, float]]:
        fold_ss, rand_ss, train_ss = np.random.SeedSequence(seed, spawn_key=(r,)).spawn(3)
        fold_of = stratified_folds(d.labels, folds, np.random.default_rng(fold_ss))
        rep_fixed = fixed
        if mode == "random":
            rf = random_filtration(g.nodes, sizes, seed=rand_ss)
            rep_fixed = {k: rf.level_of_size(k) for k in sizes}
        scores: dict[int, np.ndarray] = {}
        for f, fs in zip(range(folds), train_ss.spawn(folds)):
            train = np.flatnonzero(fold_of != f)
            test = np.flatnonzero(fold_of == f)
            fitted = fit_fold(d, g, train, mode, sizes, sigma=sigma, seed=fs,
                              reg_strength=reg_strength, epochs=epochs, fixed=rep_fixed)
            for k, (part, model) in fitted.items():
                s = scores.setdefault(k, np.empty(d.n_samples))
                s[test] = model.decision_function(reduced_features(d.features[test], part))
        return {k: (auroc(s, d.labels), auprc(s, d.labels)) for k, s in scores.items()}

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_repeat, range(repeats)))
    else:
        results = [one_repeat(r) for r in range(repeats)]

    per_size, per_repeat = [], {}
    ddof = 1 if repeats > 1 else 0
    for k in sorted(results[0]):
        roc = np.array([res[k][0] for res in results])
        prc = np.array([res[k][1] for res in results])
        per_repeat[k] = {"auroc": roc, "auprc": prc}
        per_size.append({"k": k, "auroc_mean": float(roc.mean()), "auroc_std": float(roc.std(ddof=ddof)),
                         "auprc_mean": float(prc.mean()), "auprc_std": float(prc.std(ddof=ddof))})
    config = {"mode": mode, "cluster_sizes": sizes, "folds": folds, "repeats": repeats,
              "sigma": sigma, "seed": seed, "reg_strength": reg_strength, "epochs": epochs,
              "n_samples": d.n_samples, "n_nodes": d.n_nodes}
    return CVReport(mode, sizes if mode != "all_genes" else [d.n_nodes], folds, repeats,
                    per_size, config, per_repeat)
