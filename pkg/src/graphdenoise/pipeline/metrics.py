"""Ranking metrics for binary scores."""
from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from ..errors import DimensionMismatchError, NoPositivesError, SingleClassError

__all__ = ["auroc", "auprc"]


def _prep(scores, labels):
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise DimensionMismatchError(f"scores {s.shape} vs labels {y.shape}")
    return s, y == 1


def auroc(scores, labels) -> float:
    """Area under the ROC curve as the Mann-Whitney statistic.

    The fraction of (positive, negative) pairs ranked correctly, with tied
    pairs counting one half.
    """
    s, pos = _prep(scores, labels)
    n_pos = int(pos.sum())
    n_neg = len(s) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("AUROC needs both classes")
    ranks = rankdata(s)  # average ranks; half-integers are exact in float
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auprc(scores, labels) -> float:
    """Average precision: mean of precision at the rank of each positive.

    Samples are ordered by descending score; ties keep their original order
    (stable sort), so the value for tied scores depends on input order.
    """
    s, pos = _prep(scores, labels)
    n_pos = int(pos.sum())
    if n_pos == 0:
        raise NoPositivesError("AUPRC needs at least one positive")
    order = np.argsort(-s, kind="stable")
    hits = pos[order]
    precision = np.cumsum(hits) / np.arange(1, len(s) + 1)
    return float(precision[hits].sum() / n_pos)
