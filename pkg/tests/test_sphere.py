import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spheresnap.sphere import (
    AxisRotation,
    DegenerateInput,
    NotOnSphere,
    UnitSpherePoint,
    apply_rotation,
    det3,
    great_circle_orientation,
    in_circumsphere,
    intersection_direction,
    invert_rotation,
    normalize_rotation,
    on_minor_arc,
    rotate_point,
    sigma,
    sigma_common,
    tau,
)

F = Fraction
rat = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)


def det_by_elimination(rows):
    # independent oracle: fraction-exact Gaussian elimination
    m = [[F(v) for v in r] for r in rows]
    n = len(m)
    det = F(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return F(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return det


def sign(v):
    return (v > 0) - (v < 0)


def random_sphere_point(rng, d=3):
    y = [F(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(d - 1)]
    return sigma(y)


# -- sigma / tau ------------------------------------------------------------------------

@pytest.mark.parametrize("y,x", [
    ((F(0),), (F(0), F(-1))),
    ((F(1, 3),), (F(3, 5), F(-4, 5))),
    ((F(1, 2), F(1, 2)), (F(2, 3), F(2, 3), F(-1, 3))),
])
def test_sigma_tau_examples(y, x):
    assert sigma(y).coords == x
    assert tau(x) == y


def test_tau_pole():
    with pytest.raises(DegenerateInput):
        tau((F(0), F(0), F(1)))


def test_sigma_common_identity():
    nums, m = sigma_common((F(3, 8),))
    assert (nums, m) == ((48, -55), 73)


def test_unit_sphere_point_validation():
    with pytest.raises(NotOnSphere):
        UnitSpherePoint((F(1), F(1)))
    with pytest.raises(ValueError):
        UnitSpherePoint((F(1),))
    with pytest.raises(NotOnSphere):
        UnitSpherePoint.from_common((1, 1), 1)
    p = UnitSpherePoint.from_common((3, 4), 5)
    assert p.common_form() == ((3, 4), 5) and p.dim == 2


def test_round_trip_10k():
    rng = random.Random(11)
    for i in range(10_000):
        d = 2 + i % 4
        y = tuple(F(rng.randint(-10**6, 10**6), rng.randint(1, 10**4)) for _ in range(d - 1))
        x = sigma(y)
        assert sum(c * c for c in x) == 1
        assert x.coords[-1] != 1
        assert tau(x) == y
        assert sigma(tau(x)).coords == x.coords


@given(st.lists(rat, min_size=1, max_size=6))
def test_round_trip_property(y):
    assert tau(sigma(y)) == tuple(y)


# -- rotations -----------------------------------------------------------------------

def test_normalize_examples():
    x, r = normalize_rotation((1, 2, -3))
    assert x == (1, 2, -3) and r.is_identity
    x, r = normalize_rotation((3, 0, 0))
    assert x == (0, 0, -3) and (r.axis, r.flip) == (0, True)
    x, r = normalize_rotation((1, -1))
    assert x == (-1, -1) and (r.axis, r.flip) == (0, True)


def test_normalize_zero():
    with pytest.raises(DegenerateInput):
        normalize_rotation((0, 0, 0))


@given(st.lists(rat, min_size=2, max_size=8).filter(any))
def test_normalize_postcondition(v):
    x, r = normalize_rotation(v)
    assert x[-1] < 0 and abs(x[-1]) == max(abs(c) for c in v)
    assert r.axis == min(i for i, c in enumerate(v) if abs(c) == max(abs(c) for c in v))
    assert invert_rotation(x, r) == tuple(v)


@given(st.lists(rat, min_size=2, max_size=8), st.data())
def test_rotation_involution(v, data):
    d = len(v)
    r = AxisRotation(data.draw(st.integers(0, d - 1)), data.draw(st.booleans()), d)
    w = apply_rotation(v, r)
    assert invert_rotation(w, r) == tuple(v)
    assert sum(c * c for c in w) == sum(c * c for c in v)


def test_rotation_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_rotation((1, 2), AxisRotation(0, False, 3))


def test_rotate_sphere_point_stays_on_sphere():
    p = sigma((F(1, 3), F(2, 7)))
    q = rotate_point(p, AxisRotation(0, True, 3))
    assert sum(c * c for c in q) == 1
    assert rotate_point(q, AxisRotation(0, True, 3), inverse=True) == p


def test_observation2_facts():
    rng = random.Random(5)
    for _ in range(500):
        d = rng.randint(2, 6)
        x = random_sphere_point(rng, d).coords
        xr, _ = normalize_rotation(x)
        xd = xr[-1]
        assert d * xd * xd >= 1
        t = tau(xr)
        n2 = sum(c * c for c in t)
        assert n2 == (1 + xd) / (1 - xd)
        assert n2 < 1


# -- predicates ------------------------------------------------------------------------

E1, E2, E3 = (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1))


def test_orientation_examples():
    assert great_circle_orientation(E1, E2, E3) == 1
    assert great_circle_orientation(E1, E2, E1) == 0
    assert great_circle_orientation(E1, E2, (F(0), F(0), F(-1))) == -1
    with pytest.raises(DegenerateInput):
        great_circle_orientation(E1, tuple(-c for c in E1), E2)
    with pytest.raises(DegenerateInput):
        great_circle_orientation(E1, E1, E2)


def test_circumsphere_examples():
    assert in_circumsphere(E1, E2, E3, (F(2, 3), F(2, 3), F(1, 3))) == 1
    assert in_circumsphere(E1, E2, E3, (F(-1), F(0), F(0))) == -1
    assert in_circumsphere(E1, E2, E3, E1) == 0
    # orientation of the input triple must not matter
    assert in_circumsphere(E2, E1, E3, (F(2, 3), F(2, 3), F(1, 3))) == 1


def test_circumsphere_plane_through_origin():
    # plane z = 0 through the origin: the side containing (0,0,1) is above
    a, b, c = E1, E2, (F(-1), F(0), F(0))
    assert in_circumsphere(a, b, c, E3) == 1
    assert in_circumsphere(b, a, c, E3) == 1
    assert in_circumsphere(a, b, c, (F(0), F(0), F(-1))) == -1
    # plane x = 0 contains (0,0,1) and (0,1,0), so (1,0,0) decides
    a, b, c = E2, E3, (F(0), F(-1), F(0))
    assert in_circumsphere(a, b, c, E1) == 1


def test_circumsphere_degenerate():
    with pytest.raises(DegenerateInput):
        in_circumsphere(E1, E1, E2, E3)


def test_predicates_match_elimination_oracle():
    rng = random.Random(2)
    for _ in range(300):
        p1, p2, p3, q = (random_sphere_point(rng).coords for _ in range(4))
        assert great_circle_orientation(p1, p2, q) == sign(det_by_elimination([p1, p2, q]))
        assert det3(p1, p2, q) == det_by_elimination([p1, p2, q])
        u = [b - a for a, b in zip(p1, p2)]
        v = [c - a for a, c in zip(p1, p3)]
        w = [x - a for a, x in zip(p1, q)]
        s = sign(det_by_elimination([u, v, w]))
        # reference orientation: flip so the origin counts as "below"
        o = sign(det_by_elimination([u, v, [-a for a in p1]]))
        expected = -s * o if o else None
        if expected is not None:
            assert in_circumsphere(p1, p2, p3, q) == expected


def test_circumsphere_vs_dot_product_form():
    # q above the plane through p1..p3 iff n.q > n.p1 for the normal n pointing away from the origin
    rng = random.Random(9)
    for _ in range(300):
        p1, p2, p3, q = (random_sphere_point(rng).coords for _ in range(4))
        u = [b - a for a, b in zip(p1, p2)]
        v = [c - a for a, c in zip(p1, p3)]
        n = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        off = sum(a * b for a, b in zip(n, p1))
        if off < 0:
            n, off = tuple(-c for c in n), -off
        if off == 0:
            continue
        assert in_circumsphere(p1, p2, p3, q) == sign(sum(a * b for a, b in zip(n, q)) - off)


# -- intersections ------------------------------------------------------------------------

def test_intersection_examples():
    assert intersection_direction(E1, E2, E2, E3) == (0, 1, 0)
    with pytest.raises(DegenerateInput):
        intersection_direction(E1, E2, E2, E1)
    # both segments on the equator
    with pytest.raises(DegenerateInput):
        intersection_direction(E1, E2, (F(3, 5), F(4, 5), F(0)), (F(-4, 5), F(3, 5), F(0)))
    with pytest.raises(DegenerateInput):
        intersection_direction(E1, E1, E2, E3)


def test_intersection_orthogonal_to_normals():
    rng = random.Random(4)
    for _ in range(200):
        a1, a2, b1, b2 = (random_sphere_point(rng).coords for _ in range(4))
        v = intersection_direction(a1, a2, b1, b2)
        na = (a1[1] * a2[2] - a1[2] * a2[1], a1[2] * a2[0] - a1[0] * a2[2], a1[0] * a2[1] - a1[1] * a2[0])
        nb = (b1[1] * b2[2] - b1[2] * b2[1], b1[2] * b2[0] - b1[0] * b2[2], b1[0] * b2[1] - b1[1] * b2[0])
        assert sum(x * y for x, y in zip(na, v)) == 0
        assert sum(x * y for x, y in zip(nb, v)) == 0


def test_on_minor_arc():
    mid = (F(1), F(1), F(0))
    assert on_minor_arc(mid, E1, E2)
    assert not on_minor_arc(tuple(-c for c in mid), E1, E2)
    assert not on_minor_arc((F(1), F(-1), F(0)), E1, E2)
