"""Snapping points of R^d to rational points exactly on the unit sphere.

The pipeline for one point:

1. enclose the input coordinates and move the largest coordinate to the last
   axis with a negative sign (an :class:`AxisRotation`);
2. enclose the stereographic image ``tau(x / |x|)`` to a quarter of ``2**-e``;
3. pick a rational ``y`` within the per-coordinate budget of it (strategy);
   the budget is ``2**-e`` for a bits config and ``epsilon / (2 sqrt(d-1))``
   (rounded down) for an epsilon config;
4. map back with the exact inverse projection and undo the rotation;
5. certify ``|result - x/|x||_inf`` by interval arithmetic.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .numerics.approx import (
    GUARD_BITS,
    MAX_PRECISION_BITS,
    ApproxValue,
    ExactSource,
    InsufficientPrecision,
    Interval,
    PrecisionCapExceeded,
    interval_sum,
    refinement_schedule,
)
from .numerics.diophantine import (
    JacobiPerronFailure,
    cf_from_enclosure,
    dirichlet_brute,
    fixed_point_round,
    jacobi_perron_from_enclosure,
)
from .numerics.rational import isqrt_ceil, lcm_all, rational_sqrt
from .sphere import (
    AxisRotation,
    DegenerateInput,
    UnitSpherePoint,
    apply_rotation,
    invert_rotation,
    normalize_rotation,
    sigma_common,
)

MAX_EPSILON = Fraction(1, 8)
DEFAULT_BD_N = 1000
BD_N_CAP = 10**6


class Strategy(str, enum.Enum):
    FX = "fx"
    CF = "cf"
    JP = "jp"
    BD = "bd"
    AUTO = "auto"


class Objective(str, enum.Enum):
    MIN_DENOMINATOR_BITS = "min_denominator_bits"
    MIN_ERROR = "min_error"


_AUTO_ORDER = {Strategy.FX: 0, Strategy.CF: 1, Strategy.JP: 2}


class ZeroDirection(DegenerateInput):
    """The input vector is (indistinguishable from) zero."""


class SnapError(ArithmeticError):
    """A strategy could not produce a point within the requested error."""


def bits_for_epsilon(epsilon: Fraction, d: int) -> int:
    """Smallest ``e`` with ``2 sqrt(d-1) 2**-e <= epsilon``, decided exactly."""
    epsilon = Fraction(epsilon)
    e = 0
    # 4(d-1) <= eps^2 4^e
    lhs = 4 * (d - 1) * epsilon.denominator ** 2
    rhs = epsilon.numerator ** 2
    while lhs > rhs << (2 * e):
        e += 1
    return e


def epsilon_for_bits(e: int, d: int) -> Fraction:
    """Dyadic upper bound on ``2 sqrt(d-1) 2**-e`` (within ``2**-(e+64)``)."""
    return Fraction(isqrt_ceil(4 * (d - 1) << 128), 1 << (64 + e))


@dataclass(frozen=True)
class SnapConfig:
    """Target precision and strategy.  Give exactly one of ``bits`` or ``epsilon``."""

    bits: int | None = None
    epsilon: Fraction | None = None
    strategy: Strategy = Strategy.FX
    guard_bits: int = GUARD_BITS
    objective: Objective = Objective.MIN_DENOMINATOR_BITS
    bd_n: int = DEFAULT_BD_N

    def __post_init__(self):
        if (self.bits is None) == (self.epsilon is None):
            raise ValueError("give exactly one of bits or epsilon")
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "objective", Objective(self.objective))
        if self.epsilon is not None:
            eps = Fraction(self.epsilon)
            if not 0 < eps <= MAX_EPSILON:
                raise ValueError("epsilon must lie in (0, 1/8]")
            object.__setattr__(self, "epsilon", eps)
        elif self.bits < 1:
            raise ValueError("bits must be positive")
        if self.guard_bits < 1:
            raise ValueError("guard_bits must be positive")
        if not 1 <= self.bd_n <= BD_N_CAP:
            raise ValueError(f"bd_n must lie in [1, {BD_N_CAP}]")

    def resolve(self, d: int) -> tuple[int, Fraction, Fraction]:
        """``(e, epsilon, budget)`` for dimension ``d``.

        ``budget`` is the per-coordinate allowance for ``|y_i - tau_i|``: exactly
        ``2**-e`` for a bits config, a rational lower bound on
        ``epsilon / (2 sqrt(d-1))`` (never below ``2**-e``) for an epsilon config.
        """
        if d < 2:
            raise ValueError("dimension must be at least 2")
        if self.epsilon is not None:
            e = bits_for_epsilon(self.epsilon, d)
            budget = max(self.epsilon / epsilon_for_bits(0, d), Fraction(1, 1 << e))
            return e, self.epsilon, budget
        # a bits-only config may imply epsilon > 1/8; only the denominator bound needs the cap
        return self.bits, epsilon_for_bits(self.bits, d), Fraction(1, 1 << self.bits)


@dataclass(frozen=True)
class SnapResult:
    point: UnitSpherePoint
    rotation: AxisRotation
    strategy: Strategy
    certified_error: Fraction
    numerators: tuple[int, ...]
    denominator: int
    epsilon: Fraction
    bits: int
    preimage: tuple[Fraction, ...] = field(repr=False)

    @property
    def common_denominator_bits(self) -> int:
        return self.denominator.bit_length()

    @property
    def preimage_lcm(self) -> int:
        return lcm_all(v.denominator for v in self.preimage)


@dataclass(frozen=True)
class Projection:
    """Enclosure of ``tau`` of the rotated, normalized input."""

    rotation: AxisRotation
    tau: tuple[ApproxValue, ...]
    unit: tuple[Fraction, ...] | None  # exact x/|x| when available
    coords: tuple[Interval, ...] | None  # input enclosures (original order)
    norm: Interval | None


def as_sources(x: Sequence) -> tuple:
    return tuple(v if callable(v) else ExactSource(Fraction(v)) for v in x)


def _exact_projection(values: Sequence[Fraction]) -> Projection | None:
    if not any(values):
        raise ZeroDirection("zero vector has no closest sphere point")
    norm = rational_sqrt(sum(v * v for v in values))
    if norm is None:
        return None
    unit = tuple(v / norm for v in values)
    rotated, rotation = normalize_rotation(unit)
    den = 1 - rotated[-1]
    tau = tuple(ApproxValue(c / den) for c in rotated[:-1])
    return Projection(rotation, tau, unit, None, None)


def project(x: Sequence, e: int, guard_bits: int = GUARD_BITS,
            cap: int = MAX_PRECISION_BITS) -> Projection:
    """Rotation and enclosure of ``tau(x/|x|)`` with radius ``<= 2**-(e+2)``."""
    x = as_sources(x)
    d = len(x)
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if all(isinstance(s, ExactSource) for s in x):
        proj = _exact_projection([s.value for s in x])
        if proj is not None:
            return proj
    for bits in refinement_schedule(e + guard_bits, cap):
        prec = bits + 4
        vals = [src(bits) for src in x]
        ivs = [Interval.from_approx(v, prec) for v in vals]
        if all(iv.contains_zero() for iv in ivs):
            if all(v.is_exact and v.center == 0 for v in vals):
                raise ZeroDirection("zero vector has no closest sphere point")
            continue
        best = max(range(d), key=lambda i: (abs(ivs[i].lo + ivs[i].hi), -i))
        if ivs[best].contains_zero():
            continue
        rotation = AxisRotation(best, ivs[best].lo > 0, d)
        rot = apply_rotation(ivs, rotation)
        norm = interval_sum([iv.square() for iv in rot], prec).sqrt()
        den = norm - rot[-1]
        try:
            tau = [iv / den for iv in rot[:-1]]
        except InsufficientPrecision:
            continue
        limit = 1 << max(prec - e - 1, 0)
        if all(t.hi - t.lo <= limit for t in tau):
            return Projection(rotation, tuple(t.to_approx() for t in tau), None, tuple(ivs), norm)
    if all(iv.contains_zero() for iv in ivs):
        raise ZeroDirection(f"input indistinguishable from zero at {cap} bits")
    raise PrecisionCapExceeded(f"tau enclosure not reached at {cap} bits")


def choose_y(tau_values: Sequence[ApproxValue], e: int, strategy: Strategy,
             bd_n: int = DEFAULT_BD_N, budget: Fraction | None = None) -> tuple[tuple[Fraction, ...], Strategy]:
    """Rational ``y`` with ``|y_i - tau_i| <= budget`` per coordinate (default ``2**-e``).

    FX rounds to the ``2**-e`` grid, or, when the budget exceeds ``2**-e``, to
    the coarser ``2**-(e-1)`` grid if half its spacing plus the enclosure radius
    still fits.  Returns
    ``(y, strategy_used)``; Jacobi-Perron falls back to FX if its iteration cap
    is hit.  BD ignores the budget and returns the best approximation with
    denominator ``<= bd_n``.
    """
    strategy = Strategy(strategy)
    if budget is None:
        budget = Fraction(1, 1 << e)
    if strategy is Strategy.FX:
        s, step = e, Fraction(1, 1 << e)
        if e > 0 and budget > step and step + max(t.radius for t in tau_values) <= budget:
            s = e - 1
        return tuple(fixed_point_round(t, s) for t in tau_values), Strategy.FX
    if strategy is Strategy.CF:
        y = []
        for t in tau_values:
            if t.is_exact and t.center.denominator <= 1 << e:
                y.append(t.center)
                continue
            conv = cf_from_enclosure(t, budget)
            if conv is None:
                raise InsufficientPrecision("continued fraction digits uncertain")
            y.append(Fraction(conv.p[0], conv.q))
        return tuple(y), Strategy.CF
    if strategy is Strategy.JP:
        if len(tau_values) != 2:
            raise ValueError("the Jacobi-Perron strategy needs d = 3; use fx or cf")
        signs = [-1 if t.center < 0 else 1 for t in tau_values]
        folded = [t if s > 0 else -t for t, s in zip(tau_values, signs)]
        if any(t.center >= 1 for t in folded):
            raise ValueError("tau outside the unit cube; input not rotation-normalized")
        try:
            conv = jacobi_perron_from_enclosure(folded, budget)
        except JacobiPerronFailure:
            return choose_y(tau_values, e, Strategy.FX, budget=budget)
        return tuple(s * Fraction(p, conv.q) for s, p in zip(signs, conv.p)), Strategy.JP
    if strategy is Strategy.BD:
        conv = dirichlet_brute([t.center for t in tau_values], bd_n)
        return conv.values, Strategy.BD
    raise ValueError(f"strategy {strategy.value} is not a single approximation method")


def _unit_error_range(nums: Sequence[int], m: int, coords: Sequence[Interval],
                      norm: Interval) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on ``max_i |n_i/m - x_i/|x||``."""
    p = norm.prec
    worst = best = 0
    for n, iv in zip(nums, coords):
        u = iv / norm
        scaled = n << p
        worst = max(worst, scaled - u.lo * m, u.hi * m - scaled)
        best = max(best, scaled - u.hi * m, u.lo * m - scaled)
    return Fraction(best, m << p), Fraction(max(worst, 0), m << p)


def _unit_error_bound(nums: Sequence[int], m: int, coords: Sequence[Interval], norm: Interval) -> Fraction:
    return _unit_error_range(nums, m, coords, norm)[1]


def certify_error(point, x: Sequence, *, bits: int | None = None, target: Fraction | None = None,
                  cap: int = MAX_PRECISION_BITS) -> Fraction:
    """Sound upper bound on ``|point - x/|x||_inf``.

    Exact when ``x`` is rational with a rational norm.  Otherwise the bound is
    computed with interval arithmetic starting at ``bits`` (default 64) and,
    when ``target`` is given, refined until it drops to ``target`` or below
    (or the error is certainly above ``target``; the bound returned then
    exceeds it).
    """
    if isinstance(point, UnitSpherePoint):
        point = point.coords
    nums_frac = [Fraction(c) for c in point]
    m = lcm_all(c.denominator for c in nums_frac)
    nums = [c.numerator * (m // c.denominator) for c in nums_frac]
    x = as_sources(x)
    if len(x) != len(nums):
        raise ValueError("dimension mismatch")
    if all(isinstance(s, ExactSource) for s in x):
        values = [s.value for s in x]
        if not any(values):
            raise ZeroDirection("zero vector")
        norm = rational_sqrt(sum(v * v for v in values))
        if norm is not None:
            return max(abs(c - v / norm) for c, v in zip(nums_frac, values))
    bound = None
    for b in refinement_schedule(bits or 64, cap):
        prec = b + 4
        ivs = [Interval.from_approx(src(b), prec) for src in x]
        norm2 = interval_sum([iv.square() for iv in ivs], prec)
        if norm2.lo <= 0:
            continue
        low, bound = _unit_error_range(nums, m, ivs, norm2.sqrt())
        if target is None or bound <= target or low > target:
            return bound
    if bound is None:
        raise ZeroDirection("input indistinguishable from zero")
    raise PrecisionCapExceeded(f"error bound {float(bound):.3g} above target at {cap} bits")


def _finish(proj: Projection, y: tuple[Fraction, ...], used: Strategy, x, e: int,
            eps: Fraction, cap: int) -> SnapResult:
    nums_rot, m = sigma_common(y)
    nums = invert_rotation(nums_rot, proj.rotation)
    point = UnitSpherePoint.from_common(nums, m)
    if proj.unit is not None:
        err = max(abs(Fraction(n, m) - u) for n, u in zip(nums, proj.unit))
    else:
        err = _unit_error_bound(nums, m, proj.coords, proj.norm)
        if err > eps:
            err = certify_error(point, x, bits=2 * proj.norm.prec, target=eps, cap=cap)
    if err > eps:
        raise SnapError(f"{used.value} result misses epsilon: {float(err):.3g} > {float(eps):.3g}")
    return SnapResult(point, proj.rotation, used, err, tuple(nums), m, eps, e, y)


def _snap_projected(proj_fn, x, e: int, eps: Fraction, budget: Fraction, strategy: Strategy,
                    config: SnapConfig, cap: int) -> SnapResult:
    guard = config.guard_bits
    while True:
        proj = proj_fn(guard)
        try:
            y, used = choose_y(proj.tau, e, strategy, config.bd_n, budget)
        except InsufficientPrecision:
            if e + 2 * guard > cap:
                raise PrecisionCapExceeded("strategy needs more precision than the cap")
            guard *= 2
            continue
        return _finish(proj, y, used, x, e, eps, cap)


def snap(x: Sequence, config: SnapConfig, *, cap: int = MAX_PRECISION_BITS) -> SnapResult:
    """Rational point exactly on the unit sphere within ``epsilon`` of ``x/|x|``.

    ``x`` is a sequence of ApproxSources (plain numbers are taken as exact).
    """
    x = as_sources(x)
    d = len(x)
    e, eps, budget = config.resolve(d)
    if config.strategy is Strategy.AUTO:
        return auto_select(x, config, cap=cap)
    if config.strategy is Strategy.JP and d != 3:
        raise ValueError("the Jacobi-Perron strategy needs d = 3; use fx or cf")
    cache = {}

    def proj_fn(guard):
        if guard not in cache:
            cache[guard] = project(x, e, guard, cap)
        return cache[guard]

    return _snap_projected(proj_fn, x, e, eps, budget, config.strategy, config, cap)


def auto_select(x: Sequence, config: SnapConfig, *, cap: int = MAX_PRECISION_BITS) -> SnapResult:
    """Run FX, CF (and JP when d = 3) and keep the best under ``config.objective``.

    Ties go to the smaller certified error, then to the order FX, CF, JP.
    """
    x = as_sources(x)
    d = len(x)
    e, eps, budget = config.resolve(d)
    cache = {}

    def proj_fn(guard):
        if guard not in cache:
            cache[guard] = project(x, e, guard, cap)
        return cache[guard]

    candidates = [Strategy.FX, Strategy.CF] + ([Strategy.JP] if d == 3 else [])
    results = [_snap_projected(proj_fn, x, e, eps, budget, s, config, cap) for s in candidates]

    def key(r: SnapResult):
        order = _AUTO_ORDER[r.strategy]
        if config.objective is Objective.MIN_ERROR:
            return (r.certified_error, order)
        return (r.common_denominator_bits, r.certified_error, order)

    return min(results, key=key)


def _snap_one(args):
    x, config = args
    return snap(x, config)


def snap_many(points: Iterable[Sequence], config: SnapConfig, jobs: int = 1) -> Iterable[SnapResult]:
    """Order-preserving map of :func:`snap`; ``jobs > 1`` uses worker processes."""
    if jobs <= 1:
        for x in points:
            yield snap(x, config)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_snap_one, ((tuple(x), config) for x in points), chunksize=64)
