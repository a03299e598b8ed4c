"""Choosing a smoothing bandwidth on a graph.

Run: python demos/02_kernel_bandwidth.py
"""
import numpy as np

from graphdenoise.generators import random_connected_graph
from graphdenoise.graph import all_pairs_distances
from graphdenoise.kernels import expected_error_sq, kernel_matrix, optimal_alpha
from graphdenoise.simlab import NoiseSpec, mc_kernel_curve

g = random_connected_graph(50, seed=1)
d = all_pairs_distances(g)           # hop counts
f = np.cos(np.pi * d[0] / d[0].max())  # smooth in distance from node 0
print(f"{g.n_nodes} nodes, {g.n_edges} edges, diameter {int(d.max())}")

# Tiny bandwidths leave the data alone, huge ones flatten it to its mean.
print("alpha=1e-6 is identity:", np.allclose(kernel_matrix(d, 1e-6).values, np.eye(50)))
print("alpha=1e6 is uniform:  ", np.allclose(kernel_matrix(d, 1e6).values, 1 / 50))

# Closed-form expected error over the default 50-point grid
alpha, curve = optimal_alpha(f, d, epsilon=0.05)
i = int(np.argmin(curve.mean_error))
print(f"\nbest alpha {alpha:.3f} at grid index {i} of {len(curve.params) - 1}")
print(f"root error: smallest alpha {curve.mean_error[0]:.4f}, best {curve.mean_error[i]:.4f}, "
      f"largest {curve.mean_error[-1]:.4f}")

# Monte Carlo agrees with the formula
grid = np.geomspace(0.3, 3.0, 5)
mc = mc_kernel_curve(f, d, grid, NoiseSpec(0.5, seed=5, trials=2000))
for a, m, se in zip(grid, mc.mean_error, mc.std_error):
    c = expected_error_sq(f, kernel_matrix(d, a), 0.5)
    print(f"alpha {a:5.2f}  MC {m:8.4f} +- {se:.4f}   formula {c:8.4f}   z {(m - c) / se:+.2f}")
