"""Blaschke products, disk-union dynamics, and their normal-form model spaces."""

from .blaschke import (
    BlaschkeProduct,
    FixedPointReport,
    conformal_barycenter,
    critical_points,
    fixed_points,
    log_derivative_on_circle,
    normalize_critically_centered,
    normalize_fixed_point_centered,
    preimages,
    zero_sum_to_critically_centered,
)
from .circle import ArcInterval, CircleCoordinateTable, build_coordinate_table, invariant_measure
from .config import Tolerances, make_tolerances, set_tolerances, tolerance_overrides, tolerances
from .disk import Mobius, mobius_compose, mobius_from_specs, mobius_invert, mobius_to_zero
from .errors import (
    BudgetError,
    DiskDynError,
    DomainError,
    MembershipError,
    NoInteriorFixedPoint,
    NumericalError,
    TangencyWarning,
    ValidationError,
)
from .modelspace import (
    BoundaryMarking,
    ModelMap,
    act,
    boundary_markings,
    center_map,
    conjugacy_equivalent,
    is_post_critically_finite,
    kernel_N0,
    parameters_of,
    sample,
    validate_membership,
)
from .basin import BasinComponent, BasinSystem, derive_schema, straighten
from .schema import (
    GroupElement,
    MappingSchema,
    RotationElement,
    automorphism_group,
    enumerate_schemata,
    rotation_group,
    symmetry_group_order,
)

__version__ = "0.1.0"
