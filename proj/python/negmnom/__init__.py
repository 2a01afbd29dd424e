"""Infinitely divisible negative multinomial distributions."""

from ._negmnom import (
    AffineModel,
    DegenerateModel,
    DimensionMismatch,
    Distribution,
    DomainRejected,
    Error,
    ExcessTailMass,
    GuardExceeded,
    InvalidArgument,
    ModelFormatError,
    NoPositiveRoot,
    boundary_grid,
    boundary_point,
    bt_table,
    classify,
    compute_bt,
    expand,
    is_infinitely_divisible,
    log_radius,
    ps_poly,
    smallest_positive_root,
)

__all__ = [
    "AffineModel",
    "DegenerateModel",
    "DimensionMismatch",
    "Distribution",
    "DomainRejected",
    "Error",
    "ExcessTailMass",
    "GuardExceeded",
    "InvalidArgument",
    "ModelFormatError",
    "NoPositiveRoot",
    "boundary_grid",
    "boundary_point",
    "bt_table",
    "classify",
    "compute_bt",
    "expand",
    "is_infinitely_divisible",
    "log_radius",
    "ps_poly",
    "smallest_positive_root",
]
