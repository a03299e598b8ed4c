"""File formats for partitions, filtrations and JSON records."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .filtration import Filtration, Partition

__all__ = [
    "partition_to_csv",
    "partition_from_csv",
    "write_filtration",
    "read_filtration",
    "dump_json",
    "read_signal_csv",
]


def partition_to_csv(p: Partition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_id", "cluster_index"])
    for node, lab in zip(p.node_ids, p.labels.tolist()):
        w.writerow([node, lab])
    return buf.getvalue()


def partition_from_csv(text: str) -> Partition:
    rows = list(csv.DictReader(io.StringIO(text)))
    return Partition(tuple(r["node_id"] for r in rows),
                     np.array([int(r["cluster_index"]) for r in rows], dtype=np.intp))


def write_filtration(filt: Filtration, out_dir, extra: dict | None = None) -> Path:
    """One ``level_<t>.csv`` per level plus ``manifest.json``; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for t, p in enumerate(filt.levels):
        name = f"level_{t}.csv"
        (out / name).write_text(partition_to_csv(p), encoding="utf-8")
        files.append({"t": t, "k": p.n_clusters, "file": name})
    manifest = {"level_sizes": filt.sizes, "levels": files, "n_nodes": filt.n_nodes}
    if extra:
        manifest["config"] = extra
    path = out / "manifest.json"
    path.write_text(dump_json(manifest), encoding="utf-8")
    return path


def read_filtration(out_dir) -> Filtration:
    out = Path(out_dir)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    levels = [partition_from_csv((out / lv["file"]).read_text(encoding="utf-8"))
              for lv in sorted(manifest["levels"], key=lambda lv: lv["t"])]
    return Filtration(tuple(levels))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dump_json(obj) -> str:
    """UTF-8 friendly JSON with sorted keys; floats keep round-trip precision."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_signal_csv(path, node_ids) -> np.ndarray:
    """Signal from ``node_id,value`` rows, reordered to ``node_ids``.

    A header line is allowed if its second field does not parse as a number.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows:
        try:
            float(rows[0][1])
        except (ValueError, IndexError):
            rows = rows[1:]
    values = {r[0].strip(): float(r[1]) for r in rows}
    missing = [n for n in node_ids if n not in values]
    if missing:
        raise ValueError(f"signal file lacks {len(missing)} node(s), first is {missing[0]!r}")
    return np.array([values[n] for n in node_ids])
