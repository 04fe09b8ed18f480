"""Rational points exactly on the unit sphere, with certified error and small denominators."""

from .numerics import (
    ApproxSource,
    ApproxValue,
    BigRational,
    ChebyshevPoly,
    Convergent,
    CosPiSource,
    ExactSource,
    PrecisionCapExceeded,
    TrigProductSource,
    chebyshev_u,
    continued_fraction_approx,
    dirichlet_brute,
    fixed_point_round,
    jacobi_perron_approx,
    liouville_constant,
    rational_canonicalize,
)
from .snap import (
    MAX_EPSILON,
    Objective,
    Projection,
    SnapConfig,
    SnapError,
    SnapResult,
    Strategy,
    ZeroDirection,
    auto_select,
    bits_for_epsilon,
    certify_error,
    choose_y,
    epsilon_for_bits,
    project,
    snap,
    snap_many,
)
from .sphere import (
    AxisRotation,
    DegenerateInput,
    NotOnSphere,
    UnitSpherePoint,
    apply_rotation,
    great_circle_orientation,
    in_circumsphere,
    intersection_direction,
    invert_rotation,
    normalize_rotation,
    on_minor_arc,
    sigma,
    tau,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxSource", "ApproxValue", "BigRational", "ChebyshevPoly", "Convergent", "CosPiSource",
    "ExactSource", "PrecisionCapExceeded", "TrigProductSource", "chebyshev_u", "continued_fraction_approx",
    "dirichlet_brute", "fixed_point_round", "jacobi_perron_approx", "liouville_constant",
    "rational_canonicalize",
    "MAX_EPSILON", "Objective", "Projection", "SnapConfig", "SnapError", "SnapResult", "Strategy",
    "ZeroDirection", "auto_select", "bits_for_epsilon", "certify_error", "choose_y", "epsilon_for_bits",
    "project", "snap", "snap_many",
    "AxisRotation", "DegenerateInput", "NotOnSphere", "UnitSpherePoint", "apply_rotation",
    "great_circle_orientation", "in_circumsphere", "intersection_direction", "invert_rotation",
    "normalize_rotation", "on_minor_arc", "sigma", "tau",
]
