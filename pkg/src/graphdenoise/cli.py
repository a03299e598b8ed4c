"""Command-line experiments.

Exit codes: 0 success, 1 configuration or validation error, 2 I/O error.
Errors go to stderr as ``error: <ErrorType>: <message>``.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import TooFewPointsError
from .filtration import dyadic_filtration, multilevel_filtration, random_filtration
from .graph import all_pairs_distances, read_edge_list
from .kernels import default_alpha_grid, expected_error_sq, kernel_matrix
from .pipeline import cross_validate, read_dataset, synthetic_dataset
from .serialize import dump_json, read_signal_csv, write_filtration
from .simlab import (
    NoiseSpec,
    curve_verdict,
    expected_martingale_error_sq,
    lemma2_check,
    mc_kernel_curve,
    mc_martingale_curve,
    profile_signal,
)

DEFAULT_SIZES = "64,128,256,512,1024,2048"


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: ConfigError: {message}\n")
        sys.exit(1)


def _sizes(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _grid(spec: str, d: np.ndarray) -> np.ndarray:
    """``auto``, ``auto:N``, ``log:LO:HI:N`` or a comma list of alphas."""
    if spec == "auto":
        return default_alpha_grid(d)
    if spec.startswith("auto:"):
        return default_alpha_grid(d, int(spec[5:]))
    if spec.startswith("log:"):
        lo, hi, num = spec[4:].split(":")
        return np.geomspace(float(lo), float(hi), int(num))
    return np.array([float(a) for a in spec.split(",")])


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["version"] = __version__
    return cfg


def _filtration_for(args):
    """Dyadic filtration with interval norm, or graph filtration with node-sum norm."""
    if args.graph is None:
        filt = dyadic_filtration(args.T)
        return filt, 1.0 / math.sqrt(filt.n_nodes), None
    g = read_edge_list(args.graph)
    return multilevel_filtration(g, args.sizes), 1.0, g


def _profile(args, node_ids) -> np.ndarray:
    if args.profile == "from-file":
        if not args.profile_file:
            raise ConfigError("--profile from-file needs --profile-file")
        return read_signal_csv(args.profile_file, node_ids)
    return profile_signal(args.profile, len(node_ids))


def cmd_cluster(args) -> int:
    g = read_edge_list(args.graph)
    if args.method == "random":
        filt = random_filtration(g.nodes, args.sizes, seed=args.seed)
    else:
        filt = multilevel_filtration(g, args.sizes)
    write_filtration(filt, args.out_dir, extra=_config(args))
    return 0


def cmd_simulate_martingale(args) -> int:
    filt, scale, _ = _filtration_for(args)
    f = _profile(args, filt.node_ids)
    spec = NoiseSpec(args.epsilon, args.seed, args.trials)
    curve = mc_martingale_curve(f, filt, spec, norm_scale=scale, threads=args.threads)
    verdict = curve_verdict(curve)
    exact = np.sqrt(expected_martingale_error_sq(f, filt, args.epsilon, scale))
    out = Path(args.out)
    _write(out / "curve.csv", curve.to_csv())
    _write(out / "verdict.json", dump_json({
        "config": _config(args),
        "norm_scale": scale,
        "cluster_counts": filt.sizes,
        "verdict": verdict.to_dict(),
        "mean_error": curve.mean_error,
        "std_error": curve.std_error,
        "root_expected_error_sq": exact,
    }))
    return 0


def cmd_simulate_kernel(args) -> int:
    g = read_edge_list(args.graph)
    d = all_pairs_distances(g, args.distance)
    f = _profile(args, g.nodes)
    grid = _grid(args.grid, d)
    if grid.size < 3:
        raise TooFewPointsError(f"verdict needs at least 3 grid points, got {grid.size}")
    spec = NoiseSpec(args.epsilon, args.seed, args.trials)
    mc = mc_kernel_curve(f, d, grid, spec, threads=args.threads)
    closed = np.array([expected_error_sq(f, kernel_matrix(d, a), args.epsilon) for a in grid])
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(mc.std_error > 0, (mc.mean_error - closed) / mc.std_error, 0.0)
    verdict = curve_verdict(mc)
    out = Path(args.out)
    _write(out / "mc_curve.csv", mc.to_csv())
    closed_curve = type(mc)(grid, closed, np.zeros(grid.size), trials=0)
    _write(out / "closed_form.csv", closed_curve.to_csv())
    _write(out / "verdict.json", dump_json({
        "config": _config(args),
        "alpha": grid,
        "mc_mean_error_sq": mc.mean_error,
        "mc_std_error": mc.std_error,
        "closed_form_error_sq": closed,
        "z_scores": z,
        "max_abs_z": float(np.max(np.abs(z))),
        "verdict": verdict.to_dict(),
        "closed_form_argmin_alpha": float(grid[int(np.argmin(closed))]),
    }))
    return 0


def cmd_lemma2(args) -> int:
    filt, _, _ = _filtration_for(args)
    if args.trivial_only:
        filt = type(filt)(filt.levels[:1])
    rows = lemma2_check(filt, NoiseSpec(args.epsilon, args.seed, args.trials), threads=args.threads)
    _write(Path(args.out), dump_json({
        "config": _config(args),
        "rows": rows,
        "max_abs_z": max(abs(r["z_score"]) for r in rows),
    }))
    return 0


def cmd_evaluate(args) -> int:
    g = read_edge_list(args.graph)
    d = read_dataset(args.features, args.labels)
    report = cross_validate(d, g, args.sizes, folds=args.folds, repeats=args.repeats,
                            sigma=args.sigma, mode=args.mode, seed=args.seed,
                            reg_strength=args.reg, epochs=args.epochs, threads=args.threads)
    out = Path(args.out)
    body = report.to_dict()
    body["run_config"] = _config(args)
    _write(out / "report.json", dump_json(body))
    _write(out / "table.csv", report.to_table_csv())
    return 0


def cmd_synth(args) -> int:
    g = read_edge_list(args.graph)
    filt = multilevel_filtration(g, args.sizes)
    d = synthetic_dataset(g, filt, args.planted_level, args.effect, args.noise,
                          args.n_samples, seed=args.seed)
    out = Path(args.out)
    _write(out / "features.csv", d.features_csv())
    _write(out / "labels.csv", d.labels_csv())
    _write(out / "synth.json", dump_json({
        "config": _config(args),
        "planted_clusters": filt[args.planted_level].n_clusters,
        "level_sizes": filt.sizes,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphdenoise", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=True):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)

    def harness(sp, T):
        sp.add_argument("--T", type=int, default=T, help="dyadic depth (ignored with --graph)")
        sp.add_argument("--graph", type=Path, help="edge list; switches to a graph filtration")
        sp.add_argument("--sizes", type=_sizes, default=_sizes(DEFAULT_SIZES))

    sp = sub.add_parser("cluster", help="write nested partitions of a graph")
    sp.add_argument("--graph", type=Path, required=True)
    sp.add_argument("--sizes", type=_sizes, default=_sizes(DEFAULT_SIZES))
    sp.add_argument("--method", choices=("multilevel", "random"), default="multilevel")
    sp.add_argument("--out-dir", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("simulate-martingale", help="Monte Carlo error curve of cluster averaging")
    harness(sp, T=10)
    sp.add_argument("--profile", choices=("sin", "step", "constant", "from-file"), default="sin")
    sp.add_argument("--profile-file", type=Path)
    sp.add_argument("--epsilon", type=float, default=0.2)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--out", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_simulate_martingale)

    sp = sub.add_parser("simulate-kernel", help="Monte Carlo vs closed-form kernel smoothing error")
    sp.add_argument("--graph", type=Path, required=True)
    sp.add_argument("--distance", choices=("hop", "weighted"), default="hop")
    sp.add_argument("--profile", choices=("sin", "step", "constant", "from-file"), default="sin")
    sp.add_argument("--profile-file", type=Path)
    sp.add_argument("--epsilon", type=float, default=0.2)
    sp.add_argument("--grid", default="auto", help="auto | auto:N | log:LO:HI:N | a1,a2,...")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--out", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_simulate_kernel)

    sp = sub.add_parser("lemma2", help="chi-mean check of averaged noise norms")
    harness(sp, T=12)
    sp.add_argument("--trivial-only", action="store_true", help="use only the one-cluster level")
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--out", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_lemma2)

    sp = sub.add_parser("evaluate", help="cross-validated AUROC/AUPRC per cluster count")
    sp.add_argument("--graph", type=Path, required=True)
    sp.add_argument("--features", type=Path, required=True)
    sp.add_argument("--labels", type=Path, required=True)
    sp.add_argument("--sizes", type=_sizes, default=_sizes(DEFAULT_SIZES))
    sp.add_argument("--mode", choices=("ppi", "ppi_expr", "random", "all_genes"), default="ppi")
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--repeats", type=int, default=20)
    sp.add_argument("--sigma", type=float, default=None)
    sp.add_argument("--reg", type=float, default=0.01)
    sp.add_argument("--epochs", type=int, default=200)
    sp.add_argument("--out", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("synth", help="planted-signal two-class dataset")
    sp.add_argument("--graph", type=Path, required=True)
    sp.add_argument("--sizes", type=_sizes, default=_sizes("32"))
    sp.add_argument("--planted-level", type=int, default=1)
    sp.add_argument("--effect", type=float, default=0.5)
    sp.add_argument("--noise", type=float, default=2.0)
    sp.add_argument("--n-samples", type=int, default=120)
    sp.add_argument("--out", type=Path, required=True)
    common(sp)
    sp.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
