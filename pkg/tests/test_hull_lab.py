from fractions import Fraction
from itertools import product
from math import isqrt

import mpmath
import pytest

from latticeforge.errors import BudgetExceededError, DomainError
from latticeforge.hull_lab import (closeness_scan, exponent_D, gap_scan, integer_hull,
                                   minkowski_violations, missed_cap_volume,
                                   paraboloid_vertex_check, positive_vertex_scan,
                                   positive_vertices, region_volume, sandwich_gap,
                                   sandwich_scan, vertex_count_scan)
from latticeforge.polytope import convex_hull, euclidean_volume
from latticeforge.regions import contains, lattice_points


def test_ball_examples():
    rep = integer_hull("ball", 2, 2)
    assert rep.hull.vertices == ((-2, 0), (0, -2), (0, 2), (2, 0)) and rep.f0 == 4
    rep = integer_hull("ball", 2, 3)
    assert rep.f0 == 8
    assert set(rep.hull.vertices) == {(3, 0), (-3, 0), (0, 3), (0, -3),
                                      (2, 2), (2, -2), (-2, 2), (-2, -2)}


def test_orthant_examples():
    rep = integer_hull("orthant-ball", 2, 3)
    assert rep.hull.vertices == ((0, 0), (0, 3), (2, 2), (3, 0))
    assert positive_vertices(rep) == ((2, 2),)
    assert rep.hull_volume == 12
    assert positive_vertices(integer_hull("orthant-ball", 2, 2)) == ()
    assert set(positive_vertices(integer_hull("orthant-ball", 2, 5))) == {(3, 4), (4, 3)}


def test_report_invariants():
    for shape, d, r in [("ball", 3, 7), ("orthant-ball", 3, 9), ("ball", 2, Fraction(17, 3))]:
        rep = integer_hull(shape, d, r)
        assert all(contains(shape, d, r, v) for v in rep.hull.vertices)
        assert set(rep.X) <= set(rep.hull.vertices)
        assert rep.f0 == len(rep.hull.vertices)


def test_idempotent_and_monotone():
    rep = integer_hull("ball", 3, 5)
    pts = lattice_points(rep.hull, 3)
    assert convex_hull(pts, 3) == rep.hull
    smaller = integer_hull("ball", 3, Fraction(9, 2)).hull
    assert all(rep.hull.contains(v) for v in smaller.vertices)


def test_closeness_exact_and_pythagorean():
    rep = integer_hull("ball", 2, 5)
    assert rep.min_norm_sq == 25 and rep.max_closeness == 0.0
    rep = integer_hull("ball", 2, 3)
    assert rep.min_norm_sq == 8
    assert rep.closeness_at_most(Fraction(18, 100)) and not rep.closeness_at_most(Fraction(17, 100))


def brute_lens(rep):
    nsq = int(rep.r**2)
    d = rep.d
    h = isqrt(nsq)
    bad = []
    for x in rep.hull.vertices:
        for z in product(range(-h, h + 1), repeat=d):
            if z == x or sum(c * c for c in z) > nsq:
                continue
            if sum((2 * a - b) ** 2 for a, b in zip(x, z)) <= nsq:
                bad.append((x, z))
    return bad


@pytest.mark.parametrize("d,r", [(2, 7), (2, 12), (3, 4)])
def test_lens_certificate(d, r):
    rep = integer_hull("ball", d, r)
    assert minkowski_violations(rep) == brute_lens(rep) == []


def test_lens_detects_non_vertex():
    # (1,1) lies on an edge of I(2B^2): its lens holds other lattice points
    rep = integer_hull("ball", 2, 2)
    fake = type(rep)(rep.shape, rep.d, rep.r, convex_hull([(1, 1)], 2), (), 0, 2)
    assert minkowski_violations(fake)


def test_missed_cap_examples():
    cap = missed_cap_volume("ball", 2, 2)
    assert cap.hull_volume == 8
    with mpmath.workdps(40):
        assert mpmath.almosteq(cap.gap, 4 * mpmath.pi - 8, 1e-30)
    cap = missed_cap_volume("orthant-ball", 2, 3)
    assert cap.hull_volume == 6
    with mpmath.workdps(30):
        assert mpmath.almosteq(region_volume("ball", 3, 1), 4 * mpmath.pi / 3, 1e-28)
        # the paraboloid {x^2 <= y <= 4}, x >= 0 has area 16/3
        assert mpmath.almosteq(region_volume("paraboloid", 2, 2), mpmath.mpf(16) / 3, 1e-28)
        # {x^2 + y^2 <= z <= 4}, x, y >= 0: (pi/4) * 4^2 / 2
        assert mpmath.almosteq(region_volume("paraboloid", 3, 2), 2 * mpmath.pi, 1e-28)


def test_paraboloid_vertex_claim():
    ok, bad = paraboloid_vertex_check(2, 3)
    verts = integer_hull("paraboloid", 2, 3).hull.vertices
    assert ok and not bad and {(0, 0), (1, 1), (2, 4), (3, 9)} <= set(verts)
    assert paraboloid_vertex_check(2, 1) == (True, [])
    assert paraboloid_vertex_check(3, 2)[0]
    with pytest.raises(DomainError):
        paraboloid_vertex_check(4, 2)


def test_errors():
    with pytest.raises(DomainError):
        integer_hull("cube", 2, 3)
    with pytest.raises(DomainError):
        integer_hull("ball", 2, Fraction(1, 2))
    with pytest.raises(BudgetExceededError):
        integer_hull("ball", 3, 100, budget=10**4)
    with pytest.raises(DomainError):
        closeness_scan(2, [4, 8, 16, 32])


def test_csv_row():
    row = integer_hull("orthant-ball", 2, 5).csv_row()
    assert row["f0"] == 5 and row["|X|"] == 2 and row["hull_volume"] == 37


RADII_2D = [64, 128, 256, 512, 1024, 2048, 4096]
RADII_3D = [16, 23, 32, 45, 64, 91, 128]


def test_planar_scans():
    close = closeness_scan(2, RADII_2D)
    assert close.within(0.15) and close.notes["certified"]
    # the bound direction: every row sits under the fitted constant
    assert all(y <= close.bound_constant * float(r) ** close.target * (1 + 1e-12)
               for r, y in close.rows)
    assert vertex_count_scan(2, RADII_2D).within(0.15)
    assert gap_scan("ball", 2, RADII_2D).within(0.15)
    assert gap_scan("orthant-ball", 2, RADII_2D).within(0.15)
    assert positive_vertex_scan(2, RADII_2D).within(0.2)
    sand = sandwich_scan(2, RADII_2D)
    assert sand.exponent <= float(exponent_D(2)) + 0.2
    assert all(y >= 0 for _, y in sand.rows)


def test_spatial_scans():
    close = closeness_scan(3, RADII_3D)
    assert close.within(0.2) and close.notes["certified"]
    assert vertex_count_scan(3, RADII_3D).within(0.3)


def test_sandwich_nonnegative():
    for r in (10, 17, 30):
        assert sandwich_gap(3, r) >= 0
