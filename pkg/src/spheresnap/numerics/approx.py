"""Certified enclosures of real numbers.

An :class:`ApproxValue` is a rational ball ``[center - radius, center + radius]``
known to contain some real number.  An ApproxSource is any callable that, given
a bit count ``b``, returns such a ball with ``radius <= 2**-b``.  Sources are
pure: asking twice for the same precision gives equal answers, and they hold no
mutable state, so they can be shared between threads and processes.

:class:`Interval` is the working type for evaluating expressions: a pair of
integers scaled by ``2**-prec`` with outward (directed) rounding on every
operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Protocol, Sequence

from .rational import ceil_div

MAX_PRECISION_BITS = 4096
GUARD_BITS = 32


class PrecisionCapExceeded(ArithmeticError):
    """Raised when a certified answer needs more than the precision cap."""


class InsufficientPrecision(ArithmeticError):
    """An enclosure is too wide for the requested operation; refine and retry."""


@dataclass(frozen=True)
class ApproxValue:
    center: Fraction
    radius: Fraction = Fraction(0)

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("negative radius")

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius

    @property
    def is_exact(self) -> bool:
        return self.radius == 0

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: ApproxValue) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __neg__(self) -> ApproxValue:
        return ApproxValue(-self.center, self.radius)

    def __abs__(self) -> ApproxValue:
        if self.center >= 0:
            return self
        return -self

    def __add__(self, other: ApproxValue) -> ApproxValue:
        return ApproxValue(self.center + other.center, self.radius + other.radius)

    def __sub__(self, other: ApproxValue) -> ApproxValue:
        return ApproxValue(self.center - other.center, self.radius + other.radius)

    def __mul__(self, other: ApproxValue) -> ApproxValue:
        r = abs(self.center) * other.radius + abs(other.center) * self.radius + self.radius * other.radius
        return ApproxValue(self.center * other.center, r)

    def __repr__(self) -> str:
        return f"ApproxValue({self.center} ± {self.radius})"


class ApproxSource(Protocol):
    def __call__(self, bits: int) -> ApproxValue: ...


@dataclass(frozen=True)
class ExactSource:
    """A rational known exactly; every request returns radius 0."""

    value: Fraction

    def __call__(self, bits: int) -> ApproxValue:
        return ApproxValue(self.value)


def exact(value) -> ExactSource:
    return ExactSource(Fraction(value))


def exact_vector(values) -> tuple[ExactSource, ...]:
    return tuple(ExactSource(Fraction(v)) for v in values)


@dataclass(frozen=True)
class FixedSource:
    """Wraps one enclosure as a source; requests beyond its radius are refused."""

    value: ApproxValue

    def __call__(self, bits: int) -> ApproxValue:
        if bits >= 0 and self.value.radius * (1 << bits) > 1:
            raise InsufficientPrecision(f"fixed enclosure cannot reach {bits} bits")
        return self.value


def is_exact_source(source) -> bool:
    return isinstance(source, ExactSource)


def refinement_schedule(start_bits: int, cap: int = MAX_PRECISION_BITS) -> Iterator[int]:
    """Doubling precision schedule: ``start, 2*start, ...`` ending exactly at ``cap``.

    Callers exhaust it and then raise :class:`PrecisionCapExceeded`.
    """
    bits = max(1, min(start_bits, cap))
    while True:
        yield bits
        if bits >= cap:
            return
        bits = min(2 * bits, cap)


class Interval:
    """Closed interval ``[lo, hi] * 2**-prec`` with integer endpoints.

    All operands of a binary operation must share ``prec``.  Results are
    rounded outward, so the true value of the expression always stays inside.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: int, hi: int, prec: int):
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def from_fraction(cls, x: Fraction, prec: int) -> Interval:
        n = x.numerator << prec
        d = x.denominator
        return cls(n // d, ceil_div(n, d), prec)

    @classmethod
    def from_approx(cls, v: ApproxValue, prec: int) -> Interval:
        if v.radius == 0:
            return cls.from_fraction(v.center, prec)
        lo, hi = v.lo, v.hi
        return cls(
            (lo.numerator << prec) // lo.denominator,
            ceil_div(hi.numerator << prec, hi.denominator),
            prec,
        )

    def __repr__(self) -> str:
        return f"Interval([{self.lo}, {self.hi}] * 2^-{self.prec})"

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def to_approx(self) -> ApproxValue:
        return ApproxValue(
            Fraction(self.lo + self.hi, 1 << (self.prec + 1)),
            Fraction(self.hi - self.lo, 1 << (self.prec + 1)),
        )

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lower <= x <= self.upper

    def mag(self) -> int:
        """Scaled upper bound of ``|x|``."""
        return max(-self.lo, self.hi)

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo, self.prec)

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi, self.prec)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo, self.prec)

    def __mul__(self, other: Interval) -> Interval:
        p = self.prec
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        prods = (a * c, a * d, b * c, b * d)
        return Interval(min(prods) >> p, -((-max(prods)) >> p), p)

    def square(self) -> Interval:
        p = self.prec
        a, b = self.lo, self.hi
        if a >= 0:
            lo, hi = a * a, b * b
        elif b <= 0:
            lo, hi = b * b, a * a
        else:
            lo, hi = 0, max(a * a, b * b)
        return Interval(lo >> p, -((-hi) >> p), p)

    def __truediv__(self, other: Interval) -> Interval:
        if other.contains_zero():
            raise InsufficientPrecision("divisor interval contains zero")
        p = self.prec
        a, b = self.lo << p, self.hi << p
        c, d = other.lo, other.hi
        lows = (a // c, a // d, b // c, b // d)
        highs = (ceil_div(a, c), ceil_div(a, d), ceil_div(b, c), ceil_div(b, d))
        return Interval(min(lows), max(highs), p)

    def sqrt(self) -> Interval:
        if self.hi < 0:
            raise ValueError("square root of a negative interval")
        p = self.prec
        lo = isqrt(max(self.lo, 0) << p)
        hi_arg = self.hi << p
        hi = isqrt(hi_arg)
        if hi * hi != hi_arg:
            hi += 1
        return Interval(lo, hi, p)


def interval_sum(items: Sequence[Interval], prec: int) -> Interval:
    lo = hi = 0
    for it in items:
        lo += it.lo
        hi += it.hi
    return Interval(lo, hi, prec)
