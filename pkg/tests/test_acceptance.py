"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through the ``record`` fixture; the lines
are repeated in the terminal summary under "acceptance criteria".
"""
import time

import numpy as np

from graphdenoise.averaging import cluster_average
from graphdenoise.filtration import (
    dyadic_filtration,
    multilevel_filtration,
    random_filtration,
)
from graphdenoise.generators import random_connected_graph, random_graph, two_community_graph
from graphdenoise.graph import all_pairs_distances
from graphdenoise.kernels import expected_error_sq, kernel_matrix, optimal_alpha
from graphdenoise.pipeline import (
    Dataset,
    auprc,
    auroc,
    cross_validate,
    fit_fold,
    stratified_folds,
    synthetic_dataset,
)
from graphdenoise.simlab import (
    NoiseSpec,
    chi_norm_mean,
    curve_verdict,
    lemma2_check,
    mc_kernel_curve,
    mc_martingale_curve,
    profile_signal,
)


def _random_filtration_case(rng):
    n = int(rng.integers(8, 257))
    sizes = sorted(set(rng.integers(2, n + 1, size=int(rng.integers(1, 5))).tolist()))
    if rng.random() < 0.5:
        return random_filtration([str(i) for i in range(n)], sizes, seed=int(rng.integers(2**31)))
    g = random_graph(n, out_degree=int(rng.integers(1, 5)), seed=int(rng.integers(2**31)))
    return multilevel_filtration(g, sizes)


def test_1_exact_error_decomposition(record):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        filt = _random_filtration_case(rng)
        n = filt.n_nodes
        f = rng.normal(size=n) * rng.uniform(0.1, 10)
        eta = rng.normal(size=n) * rng.uniform(0.01, 2)
        for p in filt.levels:
            lhs = np.sum((f - cluster_average(f + eta, p)) ** 2)
            rhs = np.sum((cluster_average(f, p) - f) ** 2) + np.sum(cluster_average(eta, p) ** 2)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), np.finfo(float).tiny))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 1.0
    record("1 exact error decomposition", ok, f"max rel diff {worst:.2e}, {dt:.2f}s")
    assert ok


def test_2_noiseless_monotonicity(record):
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    worst = -np.inf
    for _ in range(100):
        filt = _random_filtration_case(rng)
        f = rng.normal(size=filt.n_nodes)
        err = np.array([np.linalg.norm(cluster_average(f, p) - f) for p in filt.levels])
        worst = max(worst, float(np.max(np.diff(err))) if err.size > 1 else -np.inf)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    record("2 noiseless monotonicity", ok, f"largest increase {worst:.2e}, {dt:.2f}s")
    assert ok


def test_3_noise_norm_statistics(record):
    t0 = time.perf_counter()
    rows = lemma2_check(dyadic_filtration(12), NoiseSpec(0.5, seed=3, trials=10_000))
    dt = time.perf_counter() - t0
    max_z = max(abs(r["z_score"]) for r in rows)
    var = [r["variance"] for r in rows if r["k_t"] >= 64]
    ok = max_z <= 4 and all(0.3 <= v <= 0.7 for v in var)
    for r in rows:
        assert r["predicted"] == chi_norm_mean(r["k_t"])
    record("3 noise norm chi statistics", ok,
           f"max|z| {max_z:.2f}, var range [{min(var):.3f}, {max(var):.3f}], {dt:.1f}s")
    assert ok


def _gap_check(curve):
    v = curve_verdict(curve)
    m, se = curve.mean_error, curve.std_error
    i, last = v.argmin_index, len(m) - 1
    gap0 = (m[0] - m[i]) / np.hypot(se[0], se[i])
    gapT = (m[last] - m[i]) / np.hypot(se[last], se[i])
    return v.interior and gap0 > 3 and gapT > 3, v, gap0, gapT


def test_4_interior_optimum_level(record):
    t0 = time.perf_counter()
    filt = dyadic_filtration(10)
    spec = NoiseSpec(0.2, seed=0, trials=200)
    curve = mc_martingale_curve(profile_signal("sin", filt.n_nodes), filt, spec,
                                norm_scale=1 / np.sqrt(filt.n_nodes))
    ok1, v1, a1, b1 = _gap_check(curve)

    g, block = two_community_graph(1024, 0.02, 0.0005, seed=0)
    gfilt = multilevel_filtration(g, [2 ** j for j in range(1, 11)])
    gcurve = mc_martingale_curve(block.astype(float), gfilt, spec)
    ok2, v2, a2, b2 = _gap_check(gcurve)
    dt = time.perf_counter() - t0
    ok = ok1 and ok2
    record("4 interior optimum level", ok,
           f"dyadic t*={v1.argmin_index} gaps {a1:.0f}/{b1:.0f} SE; "
           f"two-community t*={v2.argmin_index} gaps {a2:.0f}/{b2:.0f} SE; {dt:.1f}s")
    assert ok


def _graph50():
    g = random_connected_graph(50, seed=1)
    d = all_pairs_distances(g)
    f = np.cos(np.pi * d[0] / d[0].max())
    return g, d, f


def test_5_kernel_closed_form(record):
    t0 = time.perf_counter()
    _, d, f = _graph50()
    grid = np.geomspace(0.3, 3.0, 5)
    mc = mc_kernel_curve(f, d, grid, NoiseSpec(0.5, seed=5, trials=2000))
    closed = np.array([expected_error_sq(f, kernel_matrix(d, a), 0.5) for a in grid])
    z = (mc.mean_error - closed) / mc.std_error
    dt = time.perf_counter() - t0
    ok = bool(np.all(np.abs(z) <= 3))
    record("5 kernel closed form", ok, f"max|z| {np.max(np.abs(z)):.2f}, {dt:.1f}s")
    assert ok


def test_6_interior_bandwidth(record):
    t0 = time.perf_counter()
    _, d, f = _graph50()
    alpha, curve = optimal_alpha(f, d, 0.05)
    i = int(np.argmin(curve.mean_error))
    e = curve.mean_error
    dt = time.perf_counter() - t0
    ok = 0 < i < len(e) - 1 and e[i] < e[0] and e[i] < e[-1] and dt < 1.0
    record("6 interior bandwidth", ok,
           f"alpha*={alpha:.3f} (index {i}/{len(e) - 1}), err {e[i]:.4f} vs {e[0]:.4f}/{e[-1]:.4f}")
    assert ok


def test_7_kernel_limits(record):
    t0 = time.perf_counter()
    worst_id = worst_uni = 0.0
    for s in range(20):
        g = random_connected_graph(int(10 + 3 * s), seed=s)
        d = all_pairs_distances(g)
        n = g.n_nodes
        worst_id = max(worst_id, np.max(np.abs(kernel_matrix(d, 1e-6).values - np.eye(n))))
        worst_uni = max(worst_uni, np.max(np.abs(kernel_matrix(d, 1e6).values - 1.0 / n)))
    dt = time.perf_counter() - t0
    ok = worst_id <= 1e-12 and worst_uni <= 1e-9 and dt < 1.0
    record("7 kernel limits", ok, f"identity dev {worst_id:.1e}, uniform dev {worst_uni:.1e}")
    assert ok


def _concordance(s, y):
    pos, neg = s[y == 1], s[y == 0]
    cmp = pos[:, None] - neg[None, :]
    return (np.sum(cmp > 0) + 0.5 * np.sum(cmp == 0)) / (pos.size * neg.size)


def test_8_metric_oracles(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(808)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 80))
        y = rng.integers(0, 2, size=n)
        y[:2] = [0, 1]
        s = rng.integers(0, 10, size=n) / 9.0 if rng.random() < 0.5 else rng.normal(size=n)
        mismatches += auroc(s, y) != _concordance(s, y)
    ex1 = auroc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    ex2 = auprc([0.9, 0.8, 0.7], [1, 0, 1])
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and ex1 == 0.75 and abs(ex2 - 5 / 6) < 1e-15 and dt < 1.0
    record("8 metric oracles", ok, f"{mismatches} mismatches, auroc example {ex1}, auprc example {ex2:.6f}")
    assert ok


def test_9_pipeline_shape(record):
    t0 = time.perf_counter()
    g = random_graph(512, out_degree=4, seed=0)
    filt = multilevel_filtration(g, [32])
    d = synthetic_dataset(g, filt, planted_level=1, effect=0.5, noise=2.0, n_samples=120, seed=0)
    flat = cross_validate(d, g, [], repeats=20, mode="all_genes").per_size[0]["auroc_mean"]
    ppi = cross_validate(d, g, [32], repeats=20, mode="ppi").row(32)["auroc_mean"]
    rnd = cross_validate(d, g, [32], repeats=20, mode="random").row(32)["auroc_mean"]
    dt = time.perf_counter() - t0
    ok = 0.5 < flat < 0.75 and ppi >= flat + 0.05 and ppi > rnd and dt < 120
    record("9 pipeline shape", ok,
           f"all_genes {flat:.3f}, ppi k=32 {ppi:.3f}, random k=32 {rnd:.3f}, {dt:.0f}s")
    assert ok


def test_10_leakage_guard(record):
    t0 = time.perf_counter()
    g = random_graph(256, out_degree=4, seed=10)
    filt = multilevel_filtration(g, [16])
    d = synthetic_dataset(g, filt, 1, effect=1.0, noise=1.0, n_samples=60, seed=10)
    fold_of = stratified_folds(d.labels, 5, np.random.default_rng(0))
    rng = np.random.default_rng(1)
    identical = True
    for f in range(5):
        train, test = np.flatnonzero(fold_of != f), np.flatnonzero(fold_of == f)
        base = fit_fold(d, g, train, "ppi_expr", [4, 16, 64], seed=f)
        x = d.features.copy()
        x[test] = rng.normal(size=(test.size, d.n_nodes)) * 100.0
        pert = fit_fold(Dataset(x, d.labels, d.sample_ids, d.node_ids), g, train,
                        "ppi_expr", [4, 16, 64], seed=f)
        for k in base:
            (p0, m0), (p1, m1) = base[k], pert[k]
            identical &= (p0 == p1 and np.array_equal(m0.weights, m1.weights)
                          and m0.bias == m1.bias)
    dt = time.perf_counter() - t0
    record("10 leakage guard", identical, f"5 folds x 3 sizes bit-identical={identical}, {dt:.1f}s")
    assert identical
