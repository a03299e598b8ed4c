"""Denoising a signal by averaging over ever finer clusters.

Run: python demos/01_cluster_averaging.py
"""
import numpy as np

from graphdenoise.filtration import dyadic_filtration
from graphdenoise.simlab import NoiseSpec, curve_verdict, expected_martingale_error_sq, mc_martingale_curve, profile_signal

# The unit interval cut into 2**10 cells; level t groups them into 2**t blocks.
filt = dyadic_filtration(10)
n = filt.n_nodes
f = profile_signal("sin", n)

# One noisy observation and its block averages at a few levels
rng = np.random.default_rng(0)
obs = f + 0.2 * rng.standard_normal(n)
for t in (0, 3, 5, 10):
    p = filt[t]
    smooth = (np.bincount(p.labels, weights=obs) / p.sizes)[p.labels]
    print(f"level {t:2d}  blocks {p.n_clusters:5d}  rms error {np.sqrt(np.mean((smooth - f) ** 2)):.4f}")

# Coarse levels are biased, fine levels keep the noise. Averaging over 200
# noise draws shows the minimum sits in between.
curve = mc_martingale_curve(f, filt, NoiseSpec(epsilon=0.2, trials=200), norm_scale=1 / np.sqrt(n))
exact = np.sqrt(expected_martingale_error_sq(f, filt, 0.2, 1 / np.sqrt(n)))
print("\nt   mean error   sqrt(E err^2)")
for t, (m, e) in enumerate(zip(curve.mean_error, exact)):
    print(f"{t:2d}  {m:.5f}      {e:.5f}")
print(curve_verdict(curve))

# With a constant signal there is no bias, so the coarsest level wins.
flat = mc_martingale_curve(np.ones(n), filt, NoiseSpec(0.2, trials=200), norm_scale=1 / np.sqrt(n))
print("constant signal, best level:", curve_verdict(flat).argmin_index)
