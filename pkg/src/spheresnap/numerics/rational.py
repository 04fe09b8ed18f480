"""Canonical rationals and small integer helpers.

``fractions.Fraction`` already keeps numerator and denominator coprime with a
positive denominator, so it is used directly as the exact rational type.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Union

BigRational = Fraction

RationalLike = Union[int, str, Fraction]


def rational_canonicalize(num: int, den: int) -> Fraction:
    """Return ``num/den`` in lowest terms with the sign on the numerator."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(num, den)


def to_rational(value: RationalLike) -> Fraction:
    """Exact conversion; strings may be ``"3/5"``, ``"-0.25"`` or ``"1e-3"``."""
    if isinstance(value, float):
        # floats are dyadic rationals, keep every bit
        return Fraction(value)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic upper bound on sqrt(q), within 2**-bits of the true value."""
    scaled = q * (1 << (2 * bits))
    return Fraction(isqrt_ceil(-((-scaled.numerator) // scaled.denominator)), 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    scaled = q * (1 << (2 * bits))
    return Fraction(isqrt(scaled.numerator // scaled.denominator), 1 << bits)


def bit_size(n: int) -> int:
    return abs(n).bit_length()
