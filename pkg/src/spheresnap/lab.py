"""Executable checks of the theorems and the snapping benchmark.

Everything here is deterministic for a given seed.  Random points are built
from 53-bit floats and handed to the snapper as exact rationals, so the only
irrational quantity left is the norm.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import fmean
from typing import Iterator, Sequence

from .numerics.chebyshev import (
    COS108,
    COS108_POLY,
    CLAIMED_COS108_CONSTANT,
    QuadraticSurd,
    chebyshev_u,
    liouville_constant,
    liouville_scan,
)
from .numerics.diophantine import dirichlet_brute
from .numerics.approx import Interval
from .numerics.trig import cos_pi
from .sphere import UnitSpherePoint, apply_rotation, invert_rotation, sigma, sigma_common
from .snap import SnapConfig, SnapResult, Strategy, certify_error, project, snap

EARTH_RADIUS_M = 6_371_000
SCAN_LIMIT = 10**8
BALL_GRID_BITS = 30


# -- Theorem 3: fixed-point vectors on the sphere ---------------------------

def enumerate_float_sphere_points(d: int, max_exp: int) -> list[tuple[Fraction, ...]]:
    """All vectors of ``z / 2**max_exp`` (``|z| <= 2**max_exp``) on the unit sphere.

    The scan is exhaustive over integer vectors with ``sum z_i^2 = 4**max_exp``;
    partial sums prune branches that already overshoot.
    """
    if d < 2 or max_exp < 0:
        raise ValueError("need d >= 2 and max_exp >= 0")
    side = 2 ** (max_exp + 1) + 1
    if side ** d > SCAN_LIMIT:
        raise ValueError(f"scan of {side}^{d} candidates exceeds the {SCAN_LIMIT} guard")
    scale = 1 << max_exp
    target = scale * scale
    out = []

    def rec(prefix: list[int], remaining: int, left: int):
        if left == 1:
            z = math.isqrt(remaining)
            if z * z == remaining:
                for s in ((z, -z) if z else (0,)):
                    out.append(tuple(Fraction(v, scale) for v in prefix + [s]))
            return
        bound = math.isqrt(remaining)
        for z in range(-bound, bound + 1):
            prefix.append(z)
            rec(prefix, remaining - z * z, left - 1)
            prefix.pop()

    rec([], target, d)
    return sorted(out)


def is_trivial(point: Sequence[Fraction]) -> bool:
    return all(c in (-1, 0, 1) for c in point)


def _two_adic(c: Fraction) -> tuple[int, int]:
    # canceled form x / 2**e of a dyadic rational
    den = c.denominator
    e = den.bit_length() - 1
    if den != 1 << e:
        raise ValueError(f"{c} is not dyadic")
    return c.numerator, e


def mod4_admissible(point: Sequence[Fraction]) -> bool:
    """Necessary condition for a dyadic vector to lie on the sphere.

    Drops zero coordinates, writes the rest as ``x_i / 2**e_i`` with odd
    ``x_i`` and compares ``x_1^2 = 4^e1 - sum 4^(e1-ej) x_j^2`` modulo 4,
    where ``e1`` is the smallest exponent.  For ``d <= 3`` no non-trivial
    vector passes.
    """
    parts = [_two_adic(Fraction(c)) for c in point if c]
    if not parts:
        return False
    e1 = min(e for _, e in parts)
    if e1 == 0:
        # an integer coordinate forces the others to vanish
        return len(parts) == 1 and abs(parts[0][0]) == 1
    same = sum(1 for _, e in parts if e == e1) - 1
    return (1 + same) % 4 == 0


def float_grid(d: int, max_exp: int) -> Iterator[tuple[Fraction, ...]]:
    """Every vector of the ``2**-max_exp`` grid in ``[-1, 1]^d`` with no zero coordinate."""
    scale = 1 << max_exp
    vals = [Fraction(z, scale) for z in range(-scale, scale + 1) if z]
    return itertools.product(vals, repeat=d)


# -- Lemma 2: stretch of sigma ----------------------------------------------

def _norm2(v: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(c) ** 2 for c in v), Fraction(0))


def stretch_terms(x: Sequence, xp: Sequence) -> tuple[Fraction, Fraction]:
    """``(|x - x'|^2, |sigma x - sigma x'|^2)`` exactly; both points in the closed unit ball."""
    x = [Fraction(c) for c in x]
    xp = [Fraction(c) for c in xp]
    if len(x) != len(xp):
        raise ValueError("dimension mismatch")
    if _norm2(x) > 1 or _norm2(xp) > 1:
        raise ValueError("stretch bound needs points in the closed unit ball")
    sx, sxp = sigma(x), sigma(xp)
    return _norm2([a - b for a, b in zip(x, xp)]), _norm2([a - b for a, b in zip(sx, sxp)])


def stretch_check(x: Sequence, xp: Sequence) -> bool:
    """Exact ``4 |x - x'|^2 - |sigma x - sigma x'|^2 >= 0``."""
    lhs, rhs = stretch_terms(x, xp)
    return 4 * lhs - rhs >= 0


def stretch_ratio(x: Sequence, xp: Sequence) -> Fraction:
    lhs, rhs = stretch_terms(x, xp)
    if lhs == 0:
        raise ValueError("ratio undefined for equal points")
    return rhs / lhs


def rational_unit_direction(k: int) -> tuple[Fraction, ...]:
    """Rational unit vector along ``(1, ..., 1) / sqrt(k)``, exact when ``k`` is a square."""
    r = math.isqrt(k)
    if r * r == k:
        return (Fraction(1, r),) * k
    if k == 1:
        return (Fraction(1),)
    return snap([1] * k, SnapConfig(bits=40, strategy=Strategy.FX)).point.coords


def tightness_pair(eps: Fraction, k: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """``x = 0`` and ``x'`` of norm ``eps`` along the diagonal; the stretch ratio is ``4/(1+eps^2)``."""
    u = rational_unit_direction(k)
    return (Fraction(0),) * k, tuple(Fraction(eps) * c for c in u)


def random_ball_point(rng: random.Random, k: int, grid_bits: int = BALL_GRID_BITS) -> tuple[Fraction, ...]:
    """Uniform point of the ``2**-grid_bits`` grid inside the closed unit ball (rejection)."""
    scale = 1 << grid_bits
    while True:
        z = [rng.randint(-scale, scale) for _ in range(k)]
        if sum(v * v for v in z) <= scale * scale:
            return tuple(Fraction(v, scale) for v in z)


# -- random points ------------------------------------------------------------

def cell_rng(seed: int, cell: int = 0) -> random.Random:
    # string seeds hash through sha512, so streams are stable across runs and processes
    return random.Random(f"{seed}:{cell}")


def _uniform_open(rng: random.Random) -> float:
    while True:
        u = rng.random()
        if u > 0.0:
            return u


def _marsaglia(rng: random.Random) -> tuple[float, float, float]:
    while True:
        v1 = 2.0 * rng.random() - 1.0
        v2 = 2.0 * rng.random() - 1.0
        s = v1 * v1 + v2 * v2
        if 0.0 < s < 1.0:
            r = 2.0 * math.sqrt(1.0 - s)
            return v1 * r, v2 * r, 1.0 - 2.0 * s


def _gaussian_direction(rng: random.Random, d: int) -> list[float]:
    while True:
        g = []
        while len(g) < d:
            u1, u2 = _uniform_open(rng), rng.random()
            rad = math.sqrt(-2.0 * math.log(u1))
            g.append(rad * math.cos(2.0 * math.pi * u2))
            g.append(rad * math.sin(2.0 * math.pi * u2))
        g = g[:d]
        n = math.sqrt(math.fsum(v * v for v in g))
        if n > 1e-150:
            return [v / n for v in g]


def random_sphere_point_from(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    vals = _marsaglia(rng) if d == 3 else _gaussian_direction(rng, d)
    return tuple(Fraction(v) for v in vals)


def random_sphere_point(seed: int, d: int) -> tuple[Fraction, ...]:
    """Approximately unit point with 53-bit rational coordinates, deterministic per seed."""
    return random_sphere_point_from(cell_rng(seed), d)


def random_sphere_points(seed: int, d: int, count: int, cell: int = 0) -> list[tuple[Fraction, ...]]:
    rng = cell_rng(seed, cell)
    return [random_sphere_point_from(rng, d) for _ in range(count)]


# -- per-run invariants ---------------------------------------------------------

def observation2_holds(point: Sequence[Fraction], rotation) -> bool:
    """``|tau(x)|^2 = (1 + x_d)/(1 - x_d) < 1`` for the rotation-normalized snapped point."""
    xd = Fraction(apply_rotation(tuple(point), rotation)[-1])
    return xd < 0 and (1 + xd) / (1 - xd) < 1


def check_invariants(result: SnapResult, config: SnapConfig) -> list[str]:
    """Violations of the per-point guarantees; an empty list means all hold."""
    bad = []
    nums, m = result.numerators, result.denominator
    if sum(n * n for n in nums) != m * m:
        bad.append("not exactly on the sphere")
    if any(abs(n) > m for n in nums):
        bad.append("numerator exceeds denominator")
    if result.certified_error > result.epsilon:
        bad.append(f"certified error {float(result.certified_error):.3g} > epsilon")
    Q = result.preimage_lcm
    if m > 2 * Q * Q:
        bad.append("common denominator above 2Q^2")
    if result.strategy is Strategy.FX:
        e = result.bits
        if m > 1 << (2 * e + 1):
            bad.append("FX denominator above 2^(2e+1)")
        if config.epsilon is not None and m * config.epsilon ** 2 > 10 * (len(nums) - 1):
            bad.append("FX denominator above 10(d-1)/eps^2")
    if not observation2_holds(result.point.coords, result.rotation):
        bad.append("rotated preimage outside the unit ball")
    return bad


# -- benchmark --------------------------------------------------------------------

@dataclass(frozen=True)
class BenchCell:
    d: int
    e: int
    strategy: Strategy
    count: int
    seed: int = 0
    index: int = 0


@dataclass(frozen=True)
class BenchmarkRow:
    dataset: str
    d: int
    e: int
    strategy: str
    mean_delta_meters: float
    mean_denominator_bits: float
    mean_time_microseconds: float
    count: int
    scatter: tuple[tuple[float, int], ...] = field(default=(), repr=False, compare=False)

    HEADER = "dataset\td\te\tstrategy\tdelta_m\tq_bits\tt_us\tcount"

    def tsv(self) -> str:
        return (f"{self.dataset}\t{self.d}\t{self.e}\t{self.strategy}\t{self.mean_delta_meters:.4f}"
                f"\t{self.mean_denominator_bits:.2f}\t{self.mean_time_microseconds:.1f}\t{self.count}")


def run_cell(cell: BenchCell) -> BenchmarkRow:
    config = SnapConfig(bits=cell.e, strategy=cell.strategy)
    points = random_sphere_points(cell.seed, cell.d, cell.count, cell.index)
    deltas, bits, times, scatter = [], [], [], []
    for x in points:
        t0 = time.perf_counter()
        r = snap(x, config)
        times.append(time.perf_counter() - t0)
        bad = check_invariants(r, config)
        if bad:
            raise AssertionError(f"invariant violated for {x}: {', '.join(bad)}")
        delta = certify_error(r.point, x, bits=2 * cell.e + 64)
        if delta > r.epsilon:
            raise AssertionError(f"reference error above epsilon for {x}")
        deltas.append(float(delta))
        bits.append(r.common_denominator_bits)
        scatter.append((float(delta), r.common_denominator_bits))
    return BenchmarkRow(
        dataset=f"uar S^{cell.d - 1}",
        d=cell.d,
        e=cell.e,
        strategy=Strategy(cell.strategy).value,
        mean_delta_meters=fmean(deltas) * EARTH_RADIUS_M,
        mean_denominator_bits=fmean(bits),
        mean_time_microseconds=fmean(times) * 1e6,
        count=cell.count,
        scatter=tuple(scatter),
    )


def benchmark_grid(ds: Sequence[int], es: Sequence[int], strategies: Sequence, count: int,
                   seed: int = 0) -> list[BenchCell]:
    """Cells in row-major order; the cell index feeds the per-cell RNG stream."""
    cells = []
    for d, e, s in itertools.product(ds, es, strategies):
        s = Strategy(s)
        if s is Strategy.JP and d != 3:
            continue
        # same point set for every strategy in a (d, e) cell so strategies compare like for like
        cells.append(BenchCell(d, e, s, count, seed, index=d))
    return cells


def run_benchmark(cells: Sequence[BenchCell], jobs: int = 1, scatter_path: str | None = None) -> list[BenchmarkRow]:
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    if scatter_path:
        write_scatter(rows, scatter_path)
    return rows


def write_scatter(rows: Sequence[BenchmarkRow], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# d\te\tstrategy\terror\tq_bits\n")
        for row in rows:
            for err, q in row.scatter:
                fh.write(f"{row.d}\t{row.e}\t{row.strategy}\t{err:.6e}\t{q}\n")


# -- Liouville instance -----------------------------------------------------------

@dataclass(frozen=True)
class LiouvilleReport:
    constant: Fraction
    minimum: float
    minimum_q: int
    tail_minimum: float
    convergents: int
    all_respect_constant: bool
    claimed_violations: tuple[tuple[int, int], ...]  # convergents with q^2 |err| < 1/2


def liouville_report(root: QuadraticSurd = COS108, coeffs=COS108_POLY, c2=Fraction(1, 2),
                     q_max: int = 10**6, tail_from: int = 13) -> LiouvilleReport:
    c = liouville_constant(coeffs, root, c2)
    scan = liouville_scan(root, q_max)
    worst = min(scan, key=lambda t: t[2])
    tail = [t for t in scan if t[1] >= tail_from]
    violations = tuple((p, q) for p, q, v in scan if v < CLAIMED_COS108_CONSTANT)
    return LiouvilleReport(
        constant=c,
        minimum=float(worst[2]),
        minimum_q=worst[1],
        tail_minimum=float(min(t[2] for t in tail)) if tail else math.inf,
        convergents=len(scan),
        all_respect_constant=all(v >= c for _, _, v in scan),
        claimed_violations=violations,
    )


# -- Chebyshev roots ----------------------------------------------------------------

def chebyshev_root_enclosures(n: int, bits: int = 64) -> list[bool]:
    """For ``k = 1..n``: does ``U_n`` over an enclosure of ``cos(k pi/(n+1))`` contain 0?"""
    u = chebyshev_u(n)
    out = []
    for k in range(1, n + 1):
        av = cos_pi(Fraction(k, n + 1), bits)
        iv = Interval.from_approx(av, bits + 8)
        out.append(u(iv).contains_zero())
    return out


# -- Corollary 1 ------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletSnap:
    point: UnitSpherePoint
    q: int
    error: Fraction
    denominators_ok: bool
    error_ok: bool


def dirichlet_snap(x: Sequence, N: int, bits: int = 64) -> DirichletSnap:
    """Snap through ``sigma(p/q)`` with ``p/q`` the brute-force Dirichlet approximation of ``tau``.

    Checks ``error <= 2 sqrt(d-1) / (q N^(1/(d-1)))`` and every denominator ``<= 2 q^2``
    with exact arithmetic (the root is cleared by raising both sides to the ``2(d-1)`` power).
    """
    proj = project(x, bits)
    d = len(proj.tau) + 1
    conv = dirichlet_brute([t.center for t in proj.tau], N)
    nums_rot, m = sigma_common(conv.values)
    nums = invert_rotation(nums_rot, proj.rotation)
    point = UnitSpherePoint.from_common(nums, m)
    err = certify_error(point, x, bits=2 * bits)
    k = d - 1
    # err <= 2 sqrt(k) / (q N^(1/k))  <=>  (err q)^(2k) N^2 <= (4k)^k
    error_ok = (err * conv.q) ** (2 * k) * N * N <= (4 * k) ** k
    dens_ok = all(c.denominator <= 2 * conv.q ** 2 for c in point.coords)
    return DirichletSnap(point, conv.q, err, dens_ok, error_ok)


# -- theorem suite driver ----------------------------------------------------------------

THEOREMS = ("no-floats", "stretch", "liouville", "chebyshev", "observation2", "theorem5", "dirichlet")


@dataclass
class Report:
    name: str
    passed: bool
    lines: list[str] = field(default_factory=list)


def verify_no_floats(d: int, max_exp: int) -> Report:
    pts = enumerate_float_sphere_points(d, max_exp)
    nontrivial = [p for p in pts if not is_trivial(p)]
    lines = [f"{len(pts)} points on S^{d - 1} in P_{max_exp}^{d} ({len(nontrivial)} non-trivial)"]
    lines += [" ".join(str(c) for c in p) for p in pts]
    passed = not nontrivial if d <= 3 else all(mod4_admissible(p) for p in nontrivial)
    return Report("no-floats", passed, lines)


def verify_stretch(d: int, count: int, seed: int) -> Report:
    rng = cell_rng(seed)
    k = d - 1
    fails = sum(not stretch_check(random_ball_point(rng, k), random_ball_point(rng, k)) for _ in range(count))
    eps = Fraction(1, 8)
    ratio = stretch_ratio(*tightness_pair(eps, k))
    tight = ratio == 4 / (1 + eps * eps)
    return Report("stretch", fails == 0 and tight,
                  [f"{count} pairs in the unit ball of dimension {k}: {fails} failures",
                   f"tightness at eps=1/8: ratio {ratio} (expected {4 / (1 + eps * eps)})"])


def verify_liouville(q_max: int) -> Report:
    r = liouville_report(q_max=q_max)
    lines = [f"constant c = {float(r.constant):.6f} (>= 1/7: {r.constant >= Fraction(1, 7)})",
             f"{r.convergents} convergents with q <= {q_max}; min q^2|err| = {r.minimum:.6f} at q = {r.minimum_q}",
             f"min over q >= 13: {r.tail_minimum:.6f}"]
    if r.claimed_violations:
        shown = ", ".join(f"{p}/{q}" for p, q in r.claimed_violations)
        lines.append(f"constant 1/2 violated by {len(r.claimed_violations)} convergents: {shown}")
    return Report("liouville", r.all_respect_constant and r.constant >= Fraction(1, 7), lines)


def verify_chebyshev(n_max: int) -> Report:
    ok = all(all(chebyshev_root_enclosures(n)) for n in range(1, n_max + 1))
    return Report("chebyshev", ok, [f"U_n roots enclosed for n = 1..{n_max}: {ok}"])


def verify_observation2(d: int, count: int, seed: int, e: int) -> Report:
    cfg = SnapConfig(bits=e, strategy=Strategy.FX)
    bad = 0
    for x in random_sphere_points(seed, d, count):
        r = snap(x, cfg)
        bad += not observation2_holds(r.point.coords, r.rotation)
    return Report("observation2", bad == 0, [f"{count} FX snaps in d={d}, e={e}: {bad} with |tau|^2 >= 1"])


def verify_theorem5(d: int, count: int, seed: int, eps: Fraction) -> Report:
    cfg = SnapConfig(epsilon=eps, strategy=Strategy.FX)
    limit = 10 * (d - 1) / (eps * eps)
    worst = 0
    for x in random_sphere_points(seed, d, count):
        r = snap(x, cfg)
        worst = max(worst, max(c.denominator for c in r.point.coords))
    return Report("theorem5", worst <= limit, [f"{count} points, eps={eps}: max denominator {worst} (bound {limit})"])


def verify_dirichlet(count: int, seed: int, N: int) -> Report:
    bad = 0
    for x in random_sphere_points(seed, 3, count):
        r = dirichlet_snap(x, N)
        bad += not (r.q <= N and r.error_ok and r.denominators_ok)
    return Report("dirichlet", bad == 0, [f"{count} points, N={N}: {bad} violations"])
