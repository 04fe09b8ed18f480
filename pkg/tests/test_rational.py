from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from spheresnap.numerics.rational import (
    BigRational,
    isqrt_ceil,
    lcm_all,
    rational_canonicalize,
    rational_sqrt,
    sqrt_lower,
    sqrt_upper,
    to_rational,
)

ints = st.integers(min_value=-10**30, max_value=10**30)
nonzero = ints.filter(bool)
rationals = st.fractions(max_denominator=10**12)


@pytest.mark.parametrize("num,den,expected", [
    (2, 4, Fraction(1, 2)),
    (3, -6, Fraction(-1, 2)),
    (0, 7, Fraction(0, 1)),
])
def test_canonicalize_examples(num, den, expected):
    r = rational_canonicalize(num, den)
    assert r == expected
    assert (r.numerator, r.denominator) == (expected.numerator, expected.denominator)


def test_zero_is_zero_over_one():
    r = rational_canonicalize(0, -5)
    assert (r.numerator, r.denominator) == (0, 1)


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rational_canonicalize(1, 0)


def _canonical(r: BigRational) -> bool:
    return r.denominator >= 1 and gcd(abs(r.numerator), r.denominator) == 1


@given(ints, nonzero)
def test_canonical_form(n, d):
    r = rational_canonicalize(n, d)
    assert _canonical(r)
    assert r.numerator * d == n * r.denominator


@given(rationals, rationals)
def test_arithmetic_closure_is_canonical(a, b):
    outs = [a + b, a - b, a * b]
    if b:
        outs.append(a / b)
    assert all(_canonical(r) for r in outs)


def test_to_rational_tokens():
    assert to_rational("3/5") == Fraction(3, 5)
    assert to_rational("-0.25") == Fraction(-1, 4)
    assert to_rational("1e-3") == Fraction(1, 1000)
    assert to_rational(0.1) == Fraction(0.1)  # every bit of the double
    with pytest.raises(ValueError):
        to_rational("nan")
    with pytest.raises(ValueError):
        to_rational("1/0")


def test_lcm_all():
    assert lcm_all([4, 6, 10]) == 60
    assert lcm_all([]) == 1


@given(st.integers(min_value=0, max_value=10**40))
def test_isqrt_ceil(n):
    r = isqrt_ceil(n)
    assert r * r >= n
    assert r == 0 or (r - 1) ** 2 < n


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 16)) == Fraction(3, 4)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(0)) == 0


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**9), st.integers(8, 200))
def test_sqrt_bounds(q, bits):
    lo, hi = sqrt_lower(q, bits), sqrt_upper(q, bits)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(2, 1 << bits) * max(1, hi)
