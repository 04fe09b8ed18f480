"""Exact geometry on the unit sphere: stereographic maps, axis normalization, predicates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .numerics.rational import lcm_all

Vector = tuple[Fraction, ...]


class NotOnSphere(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class UnitSpherePoint:
    """Rational point with ``sum(x_i^2) == 1`` checked exactly on construction."""

    coords: Vector

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) < 2:
            raise ValueError("dimension must be at least 2")
        if sum(c * c for c in coords) != 1:
            raise NotOnSphere(f"not on the unit sphere: {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_common(cls, numerators: Sequence[int], m: int) -> UnitSpherePoint:
        """Build from integers with ``sum(n_i^2) == m^2`` (checked on integers)."""
        if m <= 0 or sum(n * n for n in numerators) != m * m:
            raise NotOnSphere("numerators do not satisfy sum(n_i^2) = m^2")
        obj = object.__new__(cls)
        object.__setattr__(obj, "coords", tuple(Fraction(n, m) for n in numerators))
        return obj

    @property
    def dim(self) -> int:
        return len(self.coords)

    def common_form(self) -> tuple[tuple[int, ...], int]:
        """Numerators over the least common denominator."""
        m = lcm_all(c.denominator for c in self.coords)
        return tuple(c.numerator * (m // c.denominator) for c in self.coords), m

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def sigma_common(y: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """Inverse stereographic projection from ``(0,...,0,1)`` in integer form.

    With ``y_i = p_i/Q`` over the common denominator ``Q``:
    ``n_k = 2 Q p_k``, ``n_d = S - Q^2``, ``m = Q^2 + S`` where ``S = sum p_i^2``,
    reduced by the gcd of all of them.
    """
    y = [Fraction(v) for v in y]
    Q = lcm_all(v.denominator for v in y)
    p = [v.numerator * (Q // v.denominator) for v in y]
    S = sum(pi * pi for pi in p)
    Q2 = Q * Q
    nums = [2 * Q * pi for pi in p]
    nums.append(S - Q2)
    m = Q2 + S
    g = m
    for n in nums:
        g = gcd(g, n)
        if g == 1:
            break
    if g > 1:
        nums = [n // g for n in nums]
        m //= g
    return tuple(nums), m


def sigma(y: Sequence) -> UnitSpherePoint:
    """Map ``Q^(d-1)`` onto the unit sphere minus the pole, exactly."""
    if len(y) < 1:
        raise ValueError("sigma needs at least one coordinate")
    nums, m = sigma_common(y)
    return UnitSpherePoint.from_common(nums, m)


def tau(x) -> Vector:
    """Stereographic projection from ``(0,...,0,1)`` onto ``x_d = 0``."""
    coords = tuple(Fraction(c) for c in x)
    den = 1 - coords[-1]
    if den == 0:
        raise DegenerateInput("tau is undefined at the projection pole")
    return tuple(c / den for c in coords[:-1])


@dataclass(frozen=True)
class AxisRotation:
    """Swap coordinate ``axis`` (0-based) with the last one, then optionally negate the last.

    The inverse negates first, then swaps.  ``axis == dim - 1`` with no flip is
    the identity.
    """

    axis: int
    flip: bool
    dim: int

    @classmethod
    def identity(cls, dim: int) -> AxisRotation:
        return cls(dim - 1, False, dim)

    @property
    def is_identity(self) -> bool:
        return self.axis == self.dim - 1 and not self.flip


def apply_rotation(x: Sequence, r: AxisRotation) -> tuple:
    if len(x) != r.dim:
        raise ValueError(f"dimension mismatch: {len(x)} != {r.dim}")
    out = list(x)
    out[r.axis], out[-1] = out[-1], out[r.axis]
    if r.flip:
        out[-1] = -out[-1]
    return tuple(out)


def invert_rotation(x: Sequence, r: AxisRotation) -> tuple:
    if len(x) != r.dim:
        raise ValueError(f"dimension mismatch: {len(x)} != {r.dim}")
    out = list(x)
    if r.flip:
        out[-1] = -out[-1]
    out[r.axis], out[-1] = out[-1], out[r.axis]
    return tuple(out)


def rotate_point(p: UnitSpherePoint, r: AxisRotation, inverse: bool = False) -> UnitSpherePoint:
    f = invert_rotation if inverse else apply_rotation
    obj = object.__new__(UnitSpherePoint)
    object.__setattr__(obj, "coords", f(p.coords, r))
    return obj


def choose_rotation(magnitudes: Sequence, signs: Sequence[int]) -> AxisRotation:
    """Rotation moving the first coordinate of largest magnitude to the last slot, negative."""
    d = len(magnitudes)
    best = max(range(d), key=lambda i: (magnitudes[i], -i))
    if signs[best] == 0:
        raise DegenerateInput("zero vector has no closest sphere point")
    return AxisRotation(best, signs[best] > 0, d)


def normalize_rotation(x: Sequence) -> tuple[tuple[Fraction, ...], AxisRotation]:
    """Return ``(x', r)`` with ``|x'_d| = max |x'_i|`` and ``x'_d < 0``."""
    coords = tuple(Fraction(c) for c in x)
    if not any(coords):
        raise DegenerateInput("zero vector")
    r = choose_rotation([abs(c) for c in coords], [(c > 0) - (c < 0) for c in coords])
    return apply_rotation(coords, r), r


def det3(a: Sequence, b: Sequence, c: Sequence):
    """3x3 determinant with rows ``a, b, c`` by cofactor expansion."""
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def cross(a: Sequence, b: Sequence) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _coords3(p) -> tuple:
    c = tuple(p.coords if isinstance(p, UnitSpherePoint) else p)
    if len(c) != 3:
        raise ValueError("predicate is defined on the 2-sphere")
    return c


def great_circle_orientation(p1, p2, q) -> int:
    """Side of ``q`` relative to the great circle through ``p1`` then ``p2``.

    +1 left of it, 0 on it, -1 right of it: the sign of ``det(p1, p2, q)``.
    """
    a, b, c = _coords3(p1), _coords3(p2), _coords3(q)
    if not any(cross(a, b)):
        raise DegenerateInput("equal or antipodal points do not span a great circle")
    return _sign(det3(a, b, c))


_POLE_ORDER = ((0, 0, 1), (0, 1, 0), (1, 0, 0))


def in_circumsphere(p1, p2, p3, q) -> int:
    """+1 if ``q`` is above the plane through ``p1, p2, p3``, 0 on it, -1 below.

    "Above" is the open half space not containing the origin, equivalently the
    interior of the sphere through the three points and the origin.  When the
    plane contains the origin the half space containing (0,0,1), then (0,1,0),
    then (1,0,0) is taken as above.
    """
    a, b, c, x = _coords3(p1), _coords3(p2), _coords3(p3), _coords3(q)
    u = tuple(bi - ai for ai, bi in zip(a, b))
    v = tuple(ci - ai for ai, ci in zip(a, c))
    n = cross(u, v)
    if not any(n):
        raise DegenerateInput("points do not span a plane")
    side = _sign(det3(u, v, tuple(xi - ai for ai, xi in zip(a, x))))
    offset = dot(n, a)  # origin lies on the side of sign(-offset)
    if offset != 0:
        return side if offset > 0 else -side
    for pole in _POLE_ORDER:
        s = _sign(dot(n, pole))
        if s:
            return side * s
    raise AssertionError("unreachable: non-zero normal")


def intersection_direction(a1, a2, b1, b2) -> tuple[Fraction, ...]:
    """Direction of the line where the planes of two great-circle segments meet.

    Returns ``(a1 x a2) x (b1 x b2)``; the caller picks the sign that lands
    inside both segments.
    """
    na = cross(_coords3(a1), _coords3(a2))
    nb = cross(_coords3(b1), _coords3(b2))
    if not any(na) or not any(nb):
        raise DegenerateInput("segment endpoints are equal or antipodal")
    direction = cross(na, nb)
    if not any(direction):
        raise DegenerateInput("segments lie on the same great circle")
    return tuple(Fraction(c) for c in direction)


def on_minor_arc(v, p1, p2) -> bool:
    """True if direction ``v`` lies on the shorter great-circle arc from ``p1`` to ``p2``."""
    n = cross(_coords3(p1), _coords3(p2))
    v = _coords3(v)
    return dot(cross(_coords3(p1), v), n) >= 0 and dot(cross(v, _coords3(p2)), n) >= 0 \
        and dot(v, tuple(x + y for x, y in zip(_coords3(p1), _coords3(p2)))) > 0
