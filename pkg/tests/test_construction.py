import random
from dataclasses import replace

import pytest

from latticeforge.construction import (build_delta, construct_missed, missed_range,
                                       planar_missed, thin_cut, thin_cut_sequence, threshold,
                                       verify_additivity)
from latticeforge.decomposition import decompose, g_derivative
from latticeforge.errors import DomainError, OutOfRangeError
from latticeforge.polytope import convex_hull, corner_simplex, in_family, normalized_volume


def test_thin_cut_examples():
    assert thin_cut(3, 10, 0) == corner_simplex(3, 10)
    assert normalized_volume(thin_cut(3, 10, 0)) == 1000
    assert normalized_volume(thin_cut(3, 10, 7)) == 993
    P = thin_cut(2, 5, 5)
    assert normalized_volume(P) == 20 and in_family(P, 2, 5)
    with pytest.raises(OutOfRangeError):
        thin_cut(3, 10, 11)


def test_thin_cut_halfspace_description():
    d, r, m = 3, 9, 4
    P = thin_cut(d, r, m)
    for x in range(r + 1):
        for y in range(r + 1 - x):
            for z in range(r + 1 - x - y):
                assert P.contains((x, y, z)) == (x + m * (y + z) >= m)


def test_build_delta_examples():
    d0 = build_delta(3, 60, 0, 5)
    assert d0.vertices == ((0, 0, 0), (10, 0, 0), (0, 10, 0), (0, 0, 10))
    assert d0.claimed == 1000
    d1 = build_delta(3, 60, 1, 5, 3)
    assert d1.claimed == g_derivative(3, 1, 3) == 216
    d2 = build_delta(3, 60, 2, 5, 0)
    assert d2.claimed == 0 and convex_hull(d2.vertices, 3).dim < 3
    d3 = build_delta(3, 60, 3, 5, 17)
    assert d3.claimed == 17


@pytest.mark.parametrize("args,what", [((3, 48, 1, 2, 1), "r >"), ((3, 60, 1, 0, 0), "x_0 >= 1"),
                                       ((3, 60, 1, 7, 1), "2 x_0"), ((3, 60, 1, 3, 4), "x_i"),
                                       ((3, 60, 3, 3, 49), "m_d")])
def test_build_delta_preconditions(args, what):
    with pytest.raises(DomainError, match=what):
        build_delta(*args)


def test_construct_examples():
    assert normalized_volume(construct_missed(3, 60, 0).polytope) == 216000
    c = construct_missed(3, 60, 500)
    assert c.method == "peeling" and c.decomposition.xs == (3, 3, 1)
    assert c.decomposition.remainder == 20
    assert normalized_volume(c.polytope) == 215500
    assert verify_additivity(c.sequence)
    c = construct_missed(3, 60, 61)
    assert c.decomposition.xs == (1, 1, 0) and c.decomposition.remainder == 29
    assert normalized_volume(c.polytope) == 215939
    poly, seq = construct_missed(3, 60, 500)
    assert poly == c.polytope or normalized_volume(poly) == 215500


def test_construct_range_errors():
    with pytest.raises(OutOfRangeError):
        construct_missed(3, 60, 1729)
    with pytest.raises(OutOfRangeError):
        construct_missed(3, 48, 1)
    assert missed_range(3, 60) == 1728


def test_sum_identity_uses_x_i():
    # the closing identity holds with g^(i)(x_i), not g^(i)(x_i - 1)
    for m in (61, 500, 1728):
        dec = decompose(3, m)
        assert sum(g_derivative(3, i, x) for i, x in enumerate(dec.xs)) + dec.remainder == m
        shifted = sum(g_derivative(3, i, max(x - 1, 0)) for i, x in enumerate(dec.xs))
        assert shifted + dec.remainder != m


def test_x0_equal_one_occurs_and_works():
    ones = [m for m in range(61, 200) if decompose(3, m).xs[0] == 1]
    assert ones
    for m in ones:
        assert normalized_volume(construct_missed(3, 60, m).polytope) == 216000 - m


def test_sweep_sample_d3_and_delta_containment():
    for m in range(0, 1729, 37):
        c = construct_missed(3, 60, m)
        assert normalized_volume(c.polytope) == 216000 - m
        assert in_family(c.polytope, 3, 60)
        if c.sequence:
            for delta in c.sequence.deltas:
                assert all(min(v) >= 0 and sum(v) <= 60 for v in delta.vertices)


def test_d4_sample():
    rng = random.Random(11)
    for m in (rng.randint(0, 16**4) for _ in range(20)):
        c = construct_missed(4, 400, m)
        assert normalized_volume(c.polytope) == 400**4 - m


def test_peeling_steps_shrink():
    seq = construct_missed(3, 60, 1234).sequence
    vols = [normalized_volume(p) for p in seq.polytopes]
    assert vols == sorted(vols, reverse=True)
    for prev, cur in zip(seq.polytopes, seq.polytopes[1:]):
        assert all(prev.contains(v) for v in cur.vertices)


def test_additivity_negative_control():
    seq = construct_missed(3, 60, 500).sequence
    assert verify_additivity(seq)
    bad_poly = convex_hull(seq.polytopes[1].vertices[:-1] + ((1, 1, 1),), 3)
    broken = replace(seq, polytopes=(seq.polytopes[0], bad_poly) + seq.polytopes[2:])
    assert not verify_additivity(broken)
    assert verify_additivity(thin_cut_sequence(3, 10, 7))
    assert verify_additivity(thin_cut_sequence(3, 10, 0))


def test_planar_missed_covers_range():
    for r in range(2, 16):
        for m in range(r * r - r + 1):
            P = planar_missed(r, m)
            assert normalized_volume(P) == r * r - m and in_family(P, 2, r)
    with pytest.raises(OutOfRangeError):
        planar_missed(5, 21)


def test_threshold():
    assert threshold(2) == 8 and threshold(3) == 48 and threshold(4) == 384
