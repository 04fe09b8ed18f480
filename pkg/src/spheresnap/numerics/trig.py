"""Certified cosine/sine enclosures for rational multiples of pi.

Evaluation goes through mpmath's low-level ``libmp`` routines, which take the
precision as an argument and keep no global state.  The returned radius adds a
few ulps of margin on top of the argument conversion error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .approx import MAX_PRECISION_BITS, ApproxValue, PrecisionCapExceeded, refinement_schedule

_NIVEN_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): Fraction(-1),
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): Fraction(0),
    Fraction(5, 3): Fraction(1, 2),
}


def mpf_to_fraction(v) -> Fraction:
    sign, man, exp, _ = v
    if not man:
        if v != libmp.fzero:
            raise ValueError("non-finite mpf")
        return Fraction(0)
    val = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -val if sign else val


def exact_cos_pi(x: Fraction) -> Fraction | None:
    """``cos(pi x)`` when it is rational (Niven's values), else None."""
    return _NIVEN_COS.get(Fraction(x) % 2)


def cos_pi(x: Fraction, bits: int) -> ApproxValue:
    """Enclosure of ``cos(pi x)`` with radius ``<= 2**-bits``."""
    x = Fraction(x) % 2
    ex = exact_cos_pi(x)
    if ex is not None:
        return ApproxValue(ex)
    for prec in refinement_schedule(bits + 8, MAX_PRECISION_BITS + 64):
        xm = libmp.from_rational(x.numerator, x.denominator, prec, libmp.round_nearest)
        c = libmp.mpf_cos_sin(xm, prec, libmp.round_nearest, 1, True)
        # |x| <= 2: conversion error moves cos(pi x) by <= 2 pi 2^-prec; evaluation <= 1 ulp
        radius = Fraction(16, 1 << prec)
        if radius * (1 << bits) <= 1:
            return ApproxValue(mpf_to_fraction(c), radius)
    raise PrecisionCapExceeded("cosine enclosure")


def sin_pi(x: Fraction, bits: int) -> ApproxValue:
    return cos_pi(Fraction(1, 2) - Fraction(x), bits)


@dataclass(frozen=True)
class CosPiSource:
    """ApproxSource for ``cos(pi * x)``."""

    x: Fraction

    def __call__(self, bits: int) -> ApproxValue:
        return cos_pi(self.x, bits)


@dataclass(frozen=True)
class TrigProductSource:
    """ApproxSource for ``prod_j cos(pi * x_j)``; sines enter as shifted cosines."""

    factors: tuple[Fraction, ...]

    def __call__(self, bits: int) -> ApproxValue:
        k = len(self.factors)
        # each factor is bounded by 1, so per-factor radius 2^-(bits+k+1) suffices
        out = ApproxValue(Fraction(1))
        for f in self.factors:
            out = out * cos_pi(f, bits + k + 1)
        return out


def degrees_cos(deg: Fraction) -> Fraction:
    """Argument for :func:`cos_pi` equivalent to ``cos(deg degrees)``."""
    return Fraction(deg) / 180


def degrees_sin(deg: Fraction) -> Fraction:
    return Fraction(1, 2) - Fraction(deg) / 180
