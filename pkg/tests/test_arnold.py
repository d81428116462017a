import random
from math import factorial

import pytest

from latticeforge.arnold import (InfeasibleFamilyError, base_family, census, check_long_edges,
                                 long_edges, marker_points, marker_variant, subset_hull,
                                 trim_to_volume)
from latticeforge.errors import BudgetExceededError, DomainError
from latticeforge.polytope import (apply_unimodular, canonical_form, convex_hull, corner_simplex,
                                   normalized_volume)
from latticeforge.regions import region_hull


@pytest.fixture(scope="module")
def spec120():
    return base_family(2, 120)


@pytest.fixture(scope="module")
def marked100():
    return base_family(2, 100, markers=True)


def test_infeasible_small_radius():
    with pytest.raises(InfeasibleFamilyError) as info:
        base_family(2, 20)
    assert info.value.m_max > 0 and info.value.cap == 5


def test_spec_invariants(spec120):
    s = spec120
    assert len(s.X) >= 3 and all(s.invariants.values())
    assert s.rho > 8 and (s.rho - 8) ** 2 >= s.m_max and s.rho <= 30
    assert s.V_target * factorial(2) == s.v_target


def test_subset_hull_extremes(spec120):
    s = spec120
    assert subset_hull(s, ()) == region_hull("orthant-ball", 2, 120)
    q_all = subset_hull(s, s.X)
    assert normalized_volume(q_all) == s.v_target
    assert normalized_volume(subset_hull(s, ())) - s.v_target == s.m_max
    full = normalized_volume(subset_hull(s, ()))
    for x in s.X[:5]:
        q = subset_hull(s, [x])
        assert normalized_volume(q) < full
        assert all(q.contains(v) for v in q_all.vertices)
    with pytest.raises(DomainError):
        subset_hull(s, [(1, 1)])


def test_volume_monotone_in_Z(spec120):
    s = spec120
    rng = random.Random(5)
    for _ in range(30):
        z = {x for x in s.X if rng.random() < 0.5}
        z2 = z | {x for x in s.X if rng.random() < 0.3}
        assert normalized_volume(subset_hull(s, z2)) <= normalized_volume(subset_hull(s, z))


def test_trim_extremes(spec120):
    s = spec120
    t = trim_to_volume(s, s.X)
    assert t.m_Z == 0 and normalized_volume(t.P_star) == s.v_target
    t = trim_to_volume(s, ())
    assert t.m_Z == s.m_max and normalized_volume(t.P_star) == s.v_target


def test_random_subsets_hit_target(spec120):
    s = spec120
    rng = random.Random(9)
    for _ in range(200):
        tp = trim_to_volume(s, {x for x in s.X if rng.random() < 0.5})
        assert normalized_volume(tp.P_star) == s.v_target
        assert all(isinstance(c, int) for v in tp.P_star.vertices for c in v)
        assert not check_long_edges(s, tp)


def test_long_edges_negative_control():
    S = corner_simplex(2, 100)
    found = long_edges(S, 100)
    assert len(found) == 3
    axis = [e for e in found if any(all(v[k] == 0 for v in e) for k in range(2))]
    assert len(axis) == 2


def test_marker_points():
    assert marker_points(2, 10) == ((10, 0), (0, 10), (0, 9))
    assert len(marker_points(3, 10)) == 6


def test_marker_variant_distinct(marked100):
    s = marked100
    a = marker_variant(s, ())
    b = marker_variant(s, s.X)
    assert a.canonical != b.canonical
    rep = census(s, sample=400, seed=2)
    assert rep.distinct == rep.generated and rep.volumes_ok
    # swapping axes moves the markers, so the image is in no class of the family
    swapped = apply_unimodular(b.P_star, [[0, 1], [1, 0]])
    forms = set()
    rng = random.Random(1)
    for _ in range(200):
        forms.add(marker_variant(s, {x for x in s.X if rng.random() < 0.5}).P_star.vertices)
    forms.add(b.P_star.vertices)
    assert swapped.vertices not in forms
    with pytest.raises(DomainError):
        marker_variant(base_family(2, 100), ())


def test_unmarked_classes_bounded(spec120):
    s = spec120
    # subsets and their mirror images: the only possible equivalences
    rng = random.Random(3)
    idx = {x: k for k, x in enumerate(s.X)}
    masks = set()
    for _ in range(100):
        m = rng.getrandbits(len(s.X))
        masks.add(m)
        mirror = sum(1 << idx[(x[1], x[0])] for k, x in enumerate(s.X) if m >> k & 1)
        masks.add(mirror)
    rep = census(s, masks=sorted(masks))
    assert rep.classes_bounded() and rep.distinct * 2 >= rep.generated


def test_census_budget(spec120):
    with pytest.raises(BudgetExceededError):
        census(spec120, budget=1000)


def test_census_deterministic(spec120):
    a = census(spec120, sample=50, seed=7)
    b = census(spec120, sample=50, seed=7)
    assert a.rows == b.rows


def test_implied_exponent_reported(spec120):
    e = spec120.implied_exponent()
    assert 0 < e < 1


@pytest.mark.slow
def test_spatial_family_members():
    s = base_family(3, 300)
    assert all(s.invariants.values()) and s.rho <= 75
    rng = random.Random(0)
    for z in (s.X, {x for x in s.X if rng.random() < 0.5}):
        tp = trim_to_volume(s, z)
        assert normalized_volume(tp.P_star) == s.v_target
        assert not check_long_edges(s, tp)
