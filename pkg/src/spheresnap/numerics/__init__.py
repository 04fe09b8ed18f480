"""Exact rational arithmetic, certified enclosures and Diophantine approximation."""

from .approx import (
    GUARD_BITS,
    MAX_PRECISION_BITS,
    ApproxSource,
    ApproxValue,
    ExactSource,
    FixedSource,
    InsufficientPrecision,
    Interval,
    PrecisionCapExceeded,
    exact,
    exact_vector,
    refinement_schedule,
)
from .chebyshev import (
    COS108,
    COS108_POLY,
    CLAIMED_COS108_CONSTANT,
    ChebyshevPoly,
    QuadraticSurd,
    chebyshev_u,
    liouville_constant,
    liouville_scan,
    quadratic_roots,
)
from .diophantine import (
    Convergent,
    JacobiPerronFailure,
    cf_from_enclosure,
    continued_fraction_approx,
    dirichlet_brute,
    fixed_point_round,
    jacobi_perron_approx,
    jacobi_perron_from_enclosure,
    within_dirichlet_bound,
)
from .rational import BigRational, lcm_all, rational_canonicalize, to_rational
from .trig import CosPiSource, TrigProductSource, cos_pi, sin_pi
