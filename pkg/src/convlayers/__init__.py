"""Convex layer peeling in d dimensions.

Point-set families with known layer-number behaviour, exact and accelerated
peeling, sphere nets and tangent-polytope checks, and sweep analysis.
"""

from .analysis import (FitResult, SweepRecord, cap_count, cap_profile, check_bounds,
                       evenness_alpha, fit_exponent, outward_push, theoretical_exponent)
from .constructions import (ConstructionSpec, RecursiveTrace, SpiralNestingError,
                            ThresholdError, base_line, build, grid_planar, random_ball,
                            recursive_family, shell_family, spiral_planar)
from .formats import FormatError
from .geom import EPS_GEOM, DuplicatePointsError, GeometryError, min_distance
from .nets import SphereNet, is_delta_net, maximal_separated_net
from .peeling import Layering, extreme_points, layer_number, peel
from .tangent import TangentPolytope, radial_exit, tangent_frame, verify_tangent

__all__ = [
    "EPS_GEOM", "ConstructionSpec", "DuplicatePointsError", "FitResult", "FormatError",
    "GeometryError", "Layering", "RecursiveTrace", "SphereNet", "SpiralNestingError",
    "SweepRecord", "TangentPolytope", "ThresholdError", "base_line", "build", "cap_count",
    "cap_profile", "check_bounds", "evenness_alpha", "extreme_points", "fit_exponent",
    "grid_planar", "is_delta_net", "layer_number", "maximal_separated_net", "min_distance",
    "outward_push", "peel", "radial_exit", "random_ball", "recursive_family",
    "shell_family", "spiral_planar", "tangent_frame", "theoretical_exponent",
    "verify_tangent",
]
