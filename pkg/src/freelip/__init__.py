"""Lipschitz-free spaces of finite pointed metric spaces under finite group actions."""

from .duality import dual_lp_value
from .errors import (
    ActionNotIsometric,
    BadShape,
    ClosureExceedsLimit,
    EmptySet,
    FreelipError,
    InvalidPermutation,
    MetricError,
    NegativeOrZeroOffDiagonal,
    NonZeroDiagonal,
    NotInvariant,
    NotSymmetric,
    ParseError,
    QuotientMismatch,
    TriangleViolation,
)
from .free_space import (
    FreeVector,
    LipFunction,
    TransportPlan,
    delta,
    dual_witness,
    kr_norm,
    lip_norm,
    pairing,
    pushforward,
    quotient_norm,
)
from .group import (
    ActingGroup,
    DistortionBounds,
    average_metric,
    close_generators,
    distortion_bounds,
    orbit,
    orbits,
)
from .metric import PointedMetricSpace, hausdorff_distance, min_set_distance, validate_metric
from .projections import (
    apply_affine,
    apply_induced,
    dual_action,
    fixed_space_basis,
    induced_matrix,
    kernel_basis,
    operator_norm_certificate,
    project_free,
    project_lip,
    projection_matrix,
    psi,
    psi_inverse,
    t_embed,
)
from .quotient import QuotientSpace, build_quotient, quotient_map
from .scalar import EXACT, FLOAT, Field
from .verify import CheckReport, Instance, load_instance, run_suite

__version__ = "0.1.0"
