"""Graph-structured denoising of feature vectors.

Cluster averaging over nested graph clusterings, kernel smoothing on graph
distances, Monte Carlo checks of their error curves, and a
denoise-then-classify evaluation pipeline.
"""
from .averaging import (
    ErrorCurve,
    cluster_average,
    error_curve_exact,
    martingale_sequence,
    reduced_features,
)
from .filtration import (
    Filtration,
    Partition,
    dyadic_filtration,
    growth_constant,
    multilevel_filtration,
    random_filtration,
    uniformity_gaps,
)
from .graph import Graph, all_pairs_distances, coexpression_weights, load_edge_list, read_edge_list
from .kernels import KernelMatrix, expected_error_sq, kernel_matrix, kernel_smooth, optimal_alpha
from .simlab import (
    CurveVerdict,
    NoiseSpec,
    chi_norm_mean,
    curve_verdict,
    gaussian_noise,
    lemma2_check,
    mc_kernel_curve,
    mc_martingale_curve,
)

__version__ = "0.1.0"
