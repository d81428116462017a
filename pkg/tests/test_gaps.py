import random
from math import gcd

import pytest

from latticeforge.errors import BudgetExceededError, DomainError
from latticeforge.gaps import (case_table, corollary_witnesses, deep_layer_bound, grid_distances,
                               layer, missing_intervals, prismatoid_volume, q_statistic,
                               q_value, revalidate_witnesses, theorem_intervals,
                               validate_q_metric, value_set_exhaustive, value_set_layered,
                               verify_gap_d, verify_gap_theorems)
from latticeforge.polytope import convex_hull, face_vertices, normalized_volume


@pytest.fixture(scope="module")
def layered6():
    return value_set_layered(3, 6)


def test_planar_value_sets():
    assert value_set_exhaustive(2, 3).achieved == (0, 3, 4, 5, 6, 7, 8, 9)
    assert value_set_exhaustive(2, 5).achieved == (0,) + tuple(range(5, 26))
    rep = value_set_exhaustive(2, 4)
    assert rep.gaps == [(1, 3)] and revalidate_witnesses(rep)


def test_spatial_exhaustive_small():
    rep = value_set_exhaustive(3, 2)
    assert {0, 4, 8} <= set(rep.achieved) and rep.achieved == (0, 4, 6, 7, 8)
    assert revalidate_witnesses(rep)
    with pytest.raises(BudgetExceededError):
        value_set_exhaustive(3, 8)


def test_layered_contains_proof_values(layered6):
    got = set(layered6.achieved)
    assert {36, 42, 48, 43, 49, 50, 51, 52} <= got
    assert layered6.certifying and revalidate_witnesses(layered6)


def test_prismatoid_oracle():
    rng = random.Random(2)
    for r in (6, 7):
        A = face_vertices(3, r)
        pts = layer(3, r - 1)
        for _ in range(150):
            B = rng.sample(pts, rng.randint(1, 6))
            assert prismatoid_volume(r, B) == normalized_volume(convex_hull(A + B, 3))


def test_case_table(layered6):
    checks = case_table(layered6)
    assert checks and all(checks.values()), {k: v for k, v in checks.items() if not v}


def test_deep_layer_bound():
    b = deep_layer_bound(3, 6)
    assert b.holds and b.minimum == 72
    A = face_vertices(3, 6)
    assert normalized_volume(convex_hull(A + [(4, 0, 0)], 3)) == 72
    assert normalized_volume(convex_hull(A + [(2, 1, 1)], 3)) >= 72
    assert normalized_volume(convex_hull(face_vertices(2, 5) + [(3, 0)], 2)) == 10
    assert deep_layer_bound(2, 5).minimum == 10


def test_q_statistic():
    r = 6
    s = q_statistic([(r - 1, 0, 0), (0, r - 1, 0)])
    assert s.q == r - 1
    s = q_statistic([(2, 2, 1), (2, 1, 2)])
    assert s.q == 1 and s.adjacency == ((0, 1),)
    assert q_value([(1, 1, 3)]) == 0
    assert validate_q_metric(6) and validate_q_metric(7)
    dist = grid_distances(4)
    assert dist[(3, 0, 0)][(0, 0, 3)] == 3


def test_pairs_give_r2_plus_qr():
    r = 6
    A = face_vertices(3, r)
    pts = layer(3, r - 1)
    for u in pts[:8]:
        for v in pts:
            if u == v:
                continue
            B = [u, v]
            q = q_value(B)
            diff = [a - b for a, b in zip(u, v)]
            if gcd(*diff) == 1:
                assert normalized_volume(convex_hull(A + B, 3)) == r * r + q * r


def test_corollary_witnesses():
    for r in (6, 7, 9):
        wit = corollary_witnesses(r)
        assert sorted(wit) == list(range(r * r + 2 * r, r * r + 2 * r + 5))
        for v, B in wit.items():
            assert all(sum(b) == r - 1 and min(b) >= 0 for b in B)
            assert normalized_volume(convex_hull(face_vertices(3, r) + list(B), 3)) == v
    w = corollary_witnesses(6)
    assert len(w[48]) == 3 and len(w[51]) == 4 and len(w[52]) == 3
    with pytest.raises(DomainError):
        corollary_witnesses(5)


def test_gap_certificate_r6():
    cert = verify_gap_theorems(6)
    assert cert.ok
    spans = {(c.lo, c.hi): c.status for c in cert.intervals}
    assert spans == {(37, 41): "empty", (44, 47): "empty", (53, 53): "empty",
                     (48, 52): "achieved"}
    assert [(lo, hi) for _, lo, hi in theorem_intervals(7)] == [(50, 55), (58, 62), (68, 69)]


def test_first_gap_d4():
    c = verify_gap_d(4, 4)
    assert (c.lo, c.hi, c.status) == (65, 79, "empty")


def test_sampled_layered_is_flagged():
    rep = value_set_layered(3, 9, sample=200, seed=1)
    assert not rep.certifying and rep.strategy == "layered-sampled"
    with pytest.raises(BudgetExceededError):
        value_set_layered(3, 9)


def test_missing_intervals():
    assert missing_intervals([0, 3, 4, 9], 0, 10) == [(1, 2), (5, 8), (10, 10)]
