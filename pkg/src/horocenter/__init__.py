"""Weighted centers, horosphere projections and Lipschitz selector scans
in three model Hadamard spaces (euclidean, hyperbolic hyperboloid, metric
tree with marked ends)."""

from .barycenter import (
    BarycenterResult,
    Configuration,
    ConvergenceError,
    WeightedPoint,
    center_of_mass,
    config_diameter,
    hull_sample,
    leave_one_out_step,
    two_point_center,
    unit_configuration,
)
from .horosphere import (
    ClassificationError,
    ConvexBody,
    HorosphereLevel,
    NON_SHRINKING,
    SHRINKING,
    SelectOptions,
    ShrinkClass,
    body_diameter,
    classify_body,
    first_horosphere,
    limit_separation,
    project_to_level,
    select,
    snap_singular,
)
from .lipschitz import (
    LipschitzReport,
    ScanParams,
    ScanRecord,
    branch_straddle_probe,
    hausdorff,
    mass_shift_scan,
    point_shift_scan,
    selector_scan,
)
from .spaces import (
    EUCLIDEAN,
    HYPERBOLIC,
    TREE,
    GeometryError,
    IdealPoint,
    Space,
    basepoint,
    busemann,
    distance,
    geodesic_point,
    random_point,
    ray_point,
)
from .trees import Tree, TreeError, TreePoint

__version__ = "0.1.0"

__all__ = [
    "BarycenterResult",
    "ClassificationError",
    "Configuration",
    "ConvergenceError",
    "ConvexBody",
    "EUCLIDEAN",
    "GeometryError",
    "HYPERBOLIC",
    "HorosphereLevel",
    "IdealPoint",
    "LipschitzReport",
    "NON_SHRINKING",
    "SHRINKING",
    "ScanParams",
    "ScanRecord",
    "SelectOptions",
    "ShrinkClass",
    "Space",
    "TREE",
    "Tree",
    "TreeError",
    "TreePoint",
    "WeightedPoint",
    "basepoint",
    "body_diameter",
    "branch_straddle_probe",
    "busemann",
    "center_of_mass",
    "classify_body",
    "config_diameter",
    "distance",
    "first_horosphere",
    "geodesic_point",
    "hausdorff",
    "hull_sample",
    "leave_one_out_step",
    "limit_separation",
    "mass_shift_scan",
    "point_shift_scan",
    "project_to_level",
    "random_point",
    "ray_point",
    "select",
    "selector_scan",
    "snap_singular",
    "two_point_center",
    "unit_configuration",
]
