"""Rational and simultaneous rational approximation.

Every routine returns a :class:`Convergent` whose ``error_bound`` is a
certified upper bound on ``max_i |alpha_i - p_i/q|`` for the true (possibly
only enclosed) target values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import Sequence

from .approx import (
    GUARD_BITS,
    MAX_PRECISION_BITS,
    ApproxSource,
    ApproxValue,
    InsufficientPrecision,
    PrecisionCapExceeded,
    refinement_schedule,
)
from .rational import lcm_all

JP_MAX_ITERATIONS = 20_000


class JacobiPerronFailure(ArithmeticError):
    """The Jacobi-Perron iteration hit its cap without meeting the target."""


@dataclass(frozen=True)
class Convergent:
    p: tuple[int, ...]
    q: int
    error_bound: Fraction

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("denominator must be positive")
        if self.error_bound < 0:
            raise ValueError("negative error bound")

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(pi, self.q) for pi in self.p)

    def error_against(self, alpha: Sequence[Fraction]) -> Fraction:
        """Exact ``max_i |alpha_i - p_i/q|`` for rational targets."""
        return max(abs(a - Fraction(pi, self.q)) for a, pi in zip(alpha, self.p))


def _bits_for(target: Fraction) -> int:
    if target <= 0:
        return GUARD_BITS
    return max(1, ceil(-log2(target))) + GUARD_BITS


def fixed_point_round(alpha: ApproxValue, s: int) -> Fraction:
    """Nearest point of the ``2**-s`` grid to the enclosure center.

    Ties go to the even numerator.  Requires ``alpha.radius <= 2**-(s+2)``,
    which makes the result lie within ``2**-s`` of the enclosed real.
    """
    if s < 0:
        raise ValueError("grid bits must be non-negative")
    if alpha.radius * (1 << (s + 2)) > 1:
        raise InsufficientPrecision(f"enclosure radius {alpha.radius} too wide for {s} grid bits")
    return Fraction(round(alpha.center * (1 << s)), 1 << s)


def cf_from_enclosure(alpha: ApproxValue, target: Fraction) -> Convergent | None:
    """Smallest-index continued fraction convergent meeting ``target``.

    Digits are produced from both enclosure endpoints and used only while they
    agree.  A convergent is accepted when its certified error is at most
    ``target`` and at most ``1/(2 q^2)``.  Returns None when the digits become
    uncertain first; the caller refines the enclosure.
    """
    target = Fraction(target)
    lo, hi = alpha.lo, alpha.hi
    a, b = lo.numerator, lo.denominator
    c, d = hi.numerator, hi.denominator
    a0, b0, c0, d0 = a, b, c, d
    tn, td = target.numerator, target.denominator
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    first = True
    while True:
        k = a // b
        if c // d != k:
            return None
        if first:
            p, q = k, 1
            first = False
        else:
            p, p_prev = k * p + p_prev, p
            q, q_prev = k * q + q_prev, q
        # err = max(|lo - p/q|, |hi - p/q|) = max(u/(b0 q), v/(d0 q)); compare without Fractions
        u, v = abs(a0 * q - p * b0), abs(c0 * q - p * d0)
        if u * d0 >= v * b0:
            en, ed = u, b0 * q
        else:
            en, ed = v, d0 * q
        if en * td <= tn * ed and 2 * q * q * en <= ed:
            return Convergent((p,), q, Fraction(en, ed))
        r_lo = a - k * b
        r_hi = c - k * d
        if r_lo == 0 or r_hi == 0:
            # at least one endpoint terminates here; the next digit is unknown
            return None
        a, b, c, d = d, r_hi, b, r_lo


def continued_fraction_approx(alpha: ApproxSource, target, *, start_bits: int | None = None,
                              cap: int = MAX_PRECISION_BITS) -> Convergent:
    """Continued fraction convergent ``p/q`` with certified error ``<= target``.

    The source is refined (doubling bits) until the digit sequence up to the
    accepted convergent is certain.
    """
    target = Fraction(target)
    if target <= 0:
        raise ValueError("target must be positive")
    for bits in refinement_schedule(start_bits or _bits_for(target), cap):
        conv = cf_from_enclosure(alpha(bits), target)
        if conv is not None:
            return conv
    raise PrecisionCapExceeded(f"continued fraction digits uncertain at {cap} bits")


def jacobi_perron_from_enclosure(alpha: Sequence[ApproxValue], target: Fraction,
                                 max_iterations: int = JP_MAX_ITERATIONS) -> Convergent:
    """Two-dimensional Jacobi-Perron expansion of the enclosure centers.

    The digit map is ``(x, y) -> ({y/x}, {1/x})`` with digits
    ``(floor(y/x), floor(1/x))``; convergents are the first column of the
    running product of companion matrices ``[[b,0,1],[1,0,0],[a,1,0]]``.  The
    state is kept as an integer triple ``(z0, z1, z2)`` with ``x = z1/z0`` and
    ``y = z2/z0``.  When ``x`` hits zero while ``y`` does not, the two
    coordinates are swapped and the iteration continues.
    """
    if len(alpha) != 2:
        raise ValueError("Jacobi-Perron approximation is two-dimensional")
    target = Fraction(target)
    centers = [v.center for v in alpha]
    radii = [v.radius for v in alpha]
    for cval in centers:
        if not 0 <= cval < 1:
            raise ValueError("Jacobi-Perron inputs must lie in [0, 1)")
    if max(radii) > target:
        raise InsufficientPrecision("enclosure wider than the target")

    den = lcm_all(cv.denominator for cv in centers)
    z0, z1, z2 = den, centers[0].numerator * (den // centers[0].denominator), \
        centers[1].numerator * (den // centers[1].denominator)
    col0, col1, col2 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    for _ in range(max_iterations):
        q, p1, p2 = col0
        err = max(abs(centers[0] - Fraction(p1, q)) + radii[0],
                  abs(centers[1] - Fraction(p2, q)) + radii[1])
        if err <= target:
            return Convergent((p1, p2), q, err)
        if z1 == 0:
            if z2 == 0:
                # exact expansion finished yet error > target: only radii remain
                raise InsufficientPrecision("target below enclosure radius")
            z1, z2 = z2, 0
            col1, col2 = col2, col1
        a, b = z2 // z1, z0 // z1
        z0, z1, z2 = z1, z2 - a * z1, z0 - b * z1
        col0, col1, col2 = (
            tuple(b * u + v + a * w for u, v, w in zip(col0, col1, col2)),
            col2,
            col0,
        )
    raise JacobiPerronFailure(f"no convergent within {max_iterations} iterations")


def jacobi_perron_approx(alpha: Sequence[ApproxSource], target, *, start_bits: int | None = None,
                         cap: int = MAX_PRECISION_BITS,
                         max_iterations: int = JP_MAX_ITERATIONS) -> Convergent:
    """Simultaneous approximation of a pair in ``[0,1)`` with a common denominator."""
    target = Fraction(target)
    if target < 0:
        raise ValueError("target must be non-negative")
    for bits in refinement_schedule(start_bits or _bits_for(target), cap):
        values = [src(bits) for src in alpha]
        if target == 0 and not all(v.is_exact for v in values):
            continue
        try:
            return jacobi_perron_from_enclosure(values, target, max_iterations)
        except InsufficientPrecision:
            continue
    raise PrecisionCapExceeded(f"Jacobi-Perron target not certified at {cap} bits")


def dirichlet_brute(alpha: Sequence[Fraction], N: int, *, bounded: bool = True) -> Convergent:
    """Best simultaneous approximation with denominator ``q <= N`` by exhaustive scan.

    For each ``q`` the numerators are the nearest integers to ``q * alpha_i``
    and the ``q`` with the smallest max error wins, ties going to the smaller
    ``q``.  With ``bounded`` (the default) only denominators meeting
    Dirichlet's bound ``err <= 1/(q N^(1/k))`` compete; the pigeonhole
    argument guarantees one exists.  ``bounded=False`` gives the plain
    optimum over ``1..N``, which may miss the bound.
    """
    if N < 1:
        raise ValueError("N must be positive")
    alpha = [Fraction(a) for a in alpha]
    k = len(alpha)
    B = lcm_all(a.denominator for a in alpha)
    A = [a.numerator * (B // a.denominator) for a in alpha]
    two_b = 2 * B
    Bk = B ** k
    best_q, best_r, best_p = 0, 0, ()
    for q in range(1, N + 1):
        r = 0
        ps = []
        for ai in A:
            t = q * ai
            pi = (2 * t + B) // two_b
            ps.append(pi)
            dev = abs(t - pi * B)
            if dev > r:
                r = dev
        # err * q = r / B, so the bound reads r^k N <= B^k
        if bounded and r ** k * N > Bk:
            continue
        if best_q == 0 or r * best_q < best_r * q:
            best_q, best_r, best_p = q, r, tuple(ps)
            if r == 0:
                break
    if best_q == 0:
        raise AssertionError("pigeonhole guarantee failed")
    return Convergent(best_p, best_q, Fraction(best_r, best_q * B))


def dirichlet_bound(q: int, N: int, k: int) -> float:
    """``1/(q N^(1/k))`` as a float, for reporting only."""
    return 1.0 / (q * N ** (1.0 / k))


def within_dirichlet_bound(err: Fraction, q: int, N: int, k: int) -> bool:
    """Exact test of ``err <= 1/(q N^(1/k))`` via ``(err q)^k N <= 1``."""
    return (err * q) ** k * N <= 1
