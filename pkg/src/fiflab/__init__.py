"""Alpha-fractal interpolation with Suzuki-type contraction checks and box dimension."""
from .core import (
    AffineMap,
    InterpolationData,
    Partition,
    PiecewiseLinear,
    SampledFunction,
    ScalarFunction,
    ScalingVector,
    affine_from_endpoints,
    linear_interpolant,
    make_partition,
    literal_square_base,
    square_base,
)
from .dimension import DimensionResult, analytic_box_dimension, box_count, estimate_box_dimension, fif_dimension
from .fif import FractalFunction, check_bound, construct_alpha_fif, eval_fif, perturbation_bound, rb_apply, residual_sup
from .ifs import IfsSystem, PointCloud, build_ifs, chaos_game, deterministic_attractor, hausdorff_distance, hutchinson_step

__version__ = "0.1.0"
