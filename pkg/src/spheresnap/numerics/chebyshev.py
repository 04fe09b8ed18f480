"""Chebyshev polynomials of the second kind, quadratic surds, Liouville constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd, isqrt
from typing import Iterator, Sequence

from .approx import ApproxValue, Interval
from .rational import sqrt_upper


@dataclass(frozen=True)
class ChebyshevPoly:
    degree: int
    coeffs: tuple[int, ...]  # coeffs[k] multiplies x**k

    def __call__(self, x):
        if isinstance(x, Interval):
            acc = Interval.from_fraction(Fraction(self.coeffs[-1]), x.prec)
            for c in reversed(self.coeffs[:-1]):
                acc = acc * x + Interval.from_fraction(Fraction(c), x.prec)
            return acc
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(f"{c}x^{k}" if k else str(c))
        return " + ".join(terms) or "0"


def chebyshev_u(n: int) -> ChebyshevPoly:
    """``U_n`` from ``U_0 = 1``, ``U_1 = 2x``, ``U_{k+1} = 2x U_k - U_{k-1}``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    prev, cur = [1], [0, 2]
    if n == 0:
        return ChebyshevPoly(0, (1,))
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return ChebyshevPoly(n, tuple(cur))


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _square_part(n: int) -> tuple[int, int]:
    """Split ``n = k^2 * m`` with ``m`` squarefree."""
    k, m, f = 1, n, 2
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        f += 1
    return k, m


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact real ``a + b*sqrt(n)`` with rational ``a, b`` and a non-square ``n > 1``."""

    a: Fraction
    b: Fraction
    n: int

    def __post_init__(self):
        r = isqrt(self.n)
        if self.n < 2 or r * r == self.n:
            raise ValueError("radicand must be a positive non-square")
        k, n = _square_part(self.n)
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b) * k)
        object.__setattr__(self, "n", n)

    def _lift(self, other) -> QuadraticSurd:
        if isinstance(other, QuadraticSurd):
            if other.n != self.n:
                raise ValueError("mixed radicands")
            return other
        return QuadraticSurd(Fraction(other), Fraction(0), self.n)

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 n
        d = a * a - b * b * self.n
        return sa if d > 0 else (-sa if d < 0 else 0)

    def conjugate(self) -> QuadraticSurd:
        return QuadraticSurd(self.a, -self.b, self.n)

    def __add__(self, other):
        o = self._lift(other)
        return QuadraticSurd(self.a + o.a, self.b + o.b, self.n)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.n)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadraticSurd(self.a * o.a + self.b * o.b * self.n, self.a * o.b + self.b * o.a, self.n)

    __rmul__ = __mul__

    def reciprocal(self) -> QuadraticSurd:
        norm = self.a * self.a - self.b * self.b * self.n
        return QuadraticSurd(self.a / norm, -self.b / norm, self.n)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.n ** 0.5

    def __floor__(self) -> int:
        # over a common denominator D: (A + B sqrt n) / D with B sqrt n in an open unit interval
        D = self.a.denominator * self.b.denominator // gcd(self.a.denominator, self.b.denominator)
        A = self.a.numerator * (D // self.a.denominator)
        B = self.b.numerator * (D // self.b.denominator)
        if B == 0:
            return A // D
        s = isqrt(B * B * self.n)
        low = A + s if B > 0 else A - s - 1
        # the numerator lies strictly inside (low, low + 1), so no multiple of D is crossed
        return low // D

    def __call__(self, bits: int) -> ApproxValue:
        """ApproxSource interface: dyadic enclosure with radius <= 2**-bits."""
        prec = bits + 2
        lo = floor(self * (1 << prec))
        return ApproxValue(Fraction(2 * lo + 1, 1 << (prec + 1)), Fraction(1, 1 << (prec + 1)))

    def continued_fraction(self) -> Iterator[int]:
        x = self
        while True:
            k = floor(x)
            yield k
            x = (x - k).reciprocal()

    def convergents(self, q_max: int) -> Iterator[tuple[int, int]]:
        """Exact continued fraction convergents ``(p, q)`` with ``q <= q_max``."""
        p_prev, q_prev, p, q = 1, 0, None, None
        for k in self.continued_fraction():
            if p is None:
                p, q = k, 1
            else:
                p, p_prev = k * p + p_prev, p
                q, q_prev = k * q + q_prev, q
            if q > q_max:
                return
            yield p, q


def quadratic_roots(coeffs: Sequence[int]) -> tuple[QuadraticSurd, QuadraticSurd]:
    """Roots of ``c0 + c1 x + c2 x^2`` as (smaller, larger); requires an irreducible quadratic."""
    c0, c1, c2 = coeffs
    if c2 == 0:
        raise ValueError("not a quadratic")
    disc = c1 * c1 - 4 * c0 * c2
    if disc <= 0:
        raise ValueError("quadratic has no distinct real roots")
    if isqrt(disc) ** 2 == disc:
        raise ValueError("quadratic is reducible over the rationals")
    base = Fraction(-c1, 2 * c2)
    half = Fraction(1, 2 * abs(c2))
    return QuadraticSurd(base, -half, disc), QuadraticSurd(base, half, disc)


def liouville_constant(coeffs: Sequence[int], root: QuadraticSurd, c2, bits: int = 32) -> Fraction:
    """Explicit ``c`` with ``|root - p/q| >= c/q^2`` for every rational ``p/q``.

    ``c = min(c2, 1/c1)`` where ``c1`` bounds ``|lead * (x - r')|`` on
    ``[root - c2, root + c2]`` and ``r'`` is the other root.  The leading
    coefficient must be part of ``c1``.  The result is rounded down to a
    multiple of ``2**-bits``.
    """
    lo_root, hi_root = quadratic_roots(coeffs)
    lead = coeffs[2]
    if root.n != lo_root.n or (root != lo_root and root != hi_root):
        raise ValueError("root is not a root of the polynomial")
    other = hi_root if root == lo_root else lo_root
    c2 = Fraction(c2)
    gap = abs(root - other)  # = sqrt(disc)/|lead|
    if c2 <= 0 or not gap > c2:
        raise ValueError("c2 must be positive and exclude the conjugate root")
    # c1 = |lead| (gap + c2) with gap = 2|b| sqrt(n), bounded from above
    gap_upper = sqrt_upper(4 * root.b * root.b * root.n, bits + 8)
    c1 = abs(lead) * (gap_upper + c2)
    c = min(c2, 1 / c1)
    return Fraction(floor(c * (1 << bits)), 1 << bits)


def liouville_scan(root: QuadraticSurd, q_max: int) -> list[tuple[int, int, QuadraticSurd]]:
    """``(p, q, q^2 |root - p/q|)`` for every convergent with ``q <= q_max``, exactly."""
    out = []
    for p, q in root.convergents(q_max):
        out.append((p, q, abs(root - Fraction(p, q)) * (q * q)))
    return out


# cos(108 deg) = (1 - sqrt 5)/4, root of 4x^2 - 2x - 1 (a factor of U_4)
COS108_POLY = (-1, -2, 4)
COS108 = QuadraticSurd(Fraction(1, 4), Fraction(-1, 4), 5)
CLAIMED_COS108_CONSTANT = Fraction(1, 2)  # published constant for cos 108 deg; too large, see liouville_report
