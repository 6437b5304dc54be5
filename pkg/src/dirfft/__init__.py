"""Fast directional evaluation of 2D high-frequency boundary-integral sums.

Evaluates u(x) = sum_{y != x} K(x, y) f(y) over all n boundary points in
quasi-linear time, for Helmholtz layer-potential kernels (and any other
kernel that factors into a smooth part times exp(i omega |x - y|)). The
speedup comes from directional low-rank compression of admissible
segment pairs, Chebyshev interpolation of the demodulated kernel, and
per-segment FFTs that apply all modulation frequencies at once.

Typical use::

    from dirfft import (Ellipse, build_geometry, discretize,
                        HelmholtzKernel, OperatorKind, build_plan, evaluate)

    disc = discretize(build_geometry(Ellipse()), q=5, p=8)
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    plan = build_plan(disc, kernel, m_cheb=8)
    u = evaluate(plan, f)
"""

from .bench import ResultRow, RunConfig, make_density, run_experiment, run_sweep
from .evaluate import SpectralBuffers, apply_pairs, evaluate, forward_transform, inverse_transform
from .geometry import (
    Bean,
    BoundaryGeometry,
    Discretization,
    Ellipse,
    build_geometry,
    discretize,
    max_curvature,
)
from .grids import FrequencyGrid, chebyshev_nodes, frequency_grid, interpolation_matrix, round_to_grid
from .kernels import HelmholtzKernel, KernelPoint, OperatorKind, hankel1_0, hankel1_1, kernel_evaluate
from .oracle import ErrorReport, dense_evaluate_at, relative_error, sample_points
from .plan import (
    Modulation,
    PairPlan,
    SeparationData,
    build_plan,
    classify_pairs,
    compute_factors,
    is_parabolically_separated,
    load_plan,
    rank_estimate,
    save_plan,
    separation_data,
)
from .tree import Segment, SegmentTree, build_cover_set, build_tree

__version__ = "0.1.0"

__all__ = [
    "Bean",
    "BoundaryGeometry",
    "Discretization",
    "Ellipse",
    "ErrorReport",
    "FrequencyGrid",
    "HelmholtzKernel",
    "KernelPoint",
    "Modulation",
    "OperatorKind",
    "PairPlan",
    "ResultRow",
    "RunConfig",
    "Segment",
    "SegmentTree",
    "SeparationData",
    "SpectralBuffers",
    "apply_pairs",
    "build_cover_set",
    "build_geometry",
    "build_plan",
    "build_tree",
    "chebyshev_nodes",
    "classify_pairs",
    "compute_factors",
    "dense_evaluate_at",
    "discretize",
    "evaluate",
    "forward_transform",
    "frequency_grid",
    "hankel1_0",
    "hankel1_1",
    "interpolation_matrix",
    "inverse_transform",
    "is_parabolically_separated",
    "kernel_evaluate",
    "load_plan",
    "make_density",
    "max_curvature",
    "rank_estimate",
    "relative_error",
    "round_to_grid",
    "run_experiment",
    "run_sweep",
    "sample_points",
    "save_plan",
    "separation_data",
]
