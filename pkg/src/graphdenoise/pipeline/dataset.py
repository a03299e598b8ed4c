"""Sample-by-node expression datasets and their CSV format.

Features CSV: header row ``<anything>,node_1,node_2,...``, then one row per
sample ``sample_id,v_1,v_2,...``. Labels CSV: rows ``sample_id,label`` with
label 0 or 1; an optional header whose second field is ``label`` is skipped.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..averaging import reduced_features
from ..errors import (
    DimensionMismatchError,
    DuplicateIdError,
    EmptyIntersectionError,
    MissingLabelError,
    MissingValueError,
    NonBinaryLabelError,
    SingleClassError,
)
from ..filtration import Partition
from ..graph import Graph

logger = logging.getLogger(__name__)

__all__ = [
    "Dataset",
    "load_dataset",
    "read_dataset",
    "align_to_graph",
    "reduce_dataset",
]


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    sample_ids: tuple[str, ...]
    node_ids: tuple[str, ...]

    def __post_init__(self):
        x = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels)
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        if x.ndim != 2 or x.shape != (len(self.sample_ids), len(self.node_ids)):
            raise DimensionMismatchError(
                f"features {x.shape} vs {len(self.sample_ids)} samples x {len(self.node_ids)} nodes")
        if y.shape != (x.shape[0],):
            raise DimensionMismatchError(f"{y.shape} labels for {x.shape[0]} samples")
        if not np.all(np.isfinite(x)):
            raise MissingValueError("features contain NaN or infinite values")
        if not np.all((y == 0) | (y == 1)):
            raise NonBinaryLabelError("labels must be 0 or 1")
        if len(set(y.tolist())) < 2:
            raise SingleClassError("dataset needs both classes")
        for ids, what in ((self.sample_ids, "sample"), (self.node_ids, "node")):
            if len(set(ids)) != len(ids):
                raise DuplicateIdError(f"duplicate {what} ids")
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y.astype(np.int64))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.features.shape[1]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(self.features[rows], self.labels[rows],
                       tuple(np.asarray(self.sample_ids, dtype=object)[rows]), self.node_ids)

    def features_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample_id", *self.node_ids])
        for sid, row in zip(self.sample_ids, self.features):
            w.writerow([sid, *(repr(float(v)) for v in row)])
        return buf.getvalue()

    def labels_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample_id", "label"])
        for sid, y in zip(self.sample_ids, self.labels):
            w.writerow([sid, int(y)])
        return buf.getvalue()


def _parse_float(cell: str, where: str) -> float:
    cell = cell.strip()
    if not cell:
        raise MissingValueError(f"empty cell at {where}")
    try:
        v = float(cell)
    except ValueError:
        raise MissingValueError(f"unparseable value {cell!r} at {where}") from None
    if not math.isfinite(v):
        raise MissingValueError(f"non-finite value {cell!r} at {where}")
    return v


def load_dataset(features_csv: str, labels_csv: str) -> Dataset:
    """Parse the feature and label CSV texts into an aligned :class:`Dataset`."""
    rows = [r for r in csv.reader(io.StringIO(features_csv)) if r]
    if not rows:
        raise MissingValueError("features CSV is empty")
    node_ids = [c.strip() for c in rows[0][1:]]
    if len(set(node_ids)) != len(node_ids):
        raise DuplicateIdError("duplicate node ids in features header")
    sample_ids, values = [], []
    for lineno, r in enumerate(rows[1:], 2):
        if len(r) != len(node_ids) + 1:
            raise MissingValueError(f"line {lineno}: expected {len(node_ids) + 1} fields, got {len(r)}")
        sample_ids.append(r[0].strip())
        values.append([_parse_float(c, f"line {lineno}, column {j + 2}") for j, c in enumerate(r[1:])])
    if len(set(sample_ids)) != len(sample_ids):
        raise DuplicateIdError("duplicate sample ids in features CSV")

    labels: dict[str, int] = {}
    lrows = [r for r in csv.reader(io.StringIO(labels_csv)) if r]
    if lrows and len(lrows[0]) >= 2 and lrows[0][1].strip().lower() == "label":
        lrows = lrows[1:]
    for lineno, r in enumerate(lrows, 1):
        if len(r) != 2:
            raise NonBinaryLabelError(f"labels line {lineno}: expected 'sample_id,label'")
        sid, lab = r[0].strip(), r[1].strip()
        if lab not in ("0", "1"):
            raise NonBinaryLabelError(f"sample {sid!r} has label {lab!r}")
        if sid in labels:
            raise DuplicateIdError(f"sample {sid!r} labelled twice")
        labels[sid] = int(lab)
    missing = [s for s in sample_ids if s not in labels]
    if missing:
        raise MissingLabelError(f"{len(missing)} sample(s) without a label, first is {missing[0]!r}")
    x = np.array(values, dtype=float).reshape(len(sample_ids), len(node_ids))
    y = np.array([labels[s] for s in sample_ids])
    return Dataset(x, y, tuple(sample_ids), tuple(node_ids))


def read_dataset(features_path, labels_path) -> Dataset:
    with open(features_path, encoding="utf-8") as fh:
        feats = fh.read()
    with open(labels_path, encoding="utf-8") as fh:
        labs = fh.read()
    return load_dataset(feats, labs)


def align_to_graph(d: Dataset, g: Graph) -> Dataset:
    """Keep only columns that are graph nodes, in graph node order."""
    col = {n: i for i, n in enumerate(d.node_ids)}
    keep = [n for n in g.nodes if n in col]
    if not keep:
        raise EmptyIntersectionError("no dataset column is a graph node")
    dropped = d.n_nodes - len(keep)
    if dropped:
        logger.info("align_to_graph: dropped %d of %d columns not in graph", dropped, d.n_nodes)
    idx = [col[n] for n in keep]
    return Dataset(d.features[:, idx], d.labels, d.sample_ids, tuple(keep))


def reduce_dataset(d: Dataset, p: Partition) -> Dataset:
    """Replace each sample by its per-cluster means; columns become cluster indices."""
    if p.node_ids != d.node_ids:
        raise DimensionMismatchError("partition node set differs from dataset columns")
    x = reduced_features(d.features, p)
    return Dataset(x, d.labels, d.sample_ids, tuple(str(k) for k in range(p.n_clusters)))
