"""Lattice points of the closed regions used throughout the package.

Membership is decided with integer comparisons only. Radii may be
rationals; since squared norms are integers, ``|x|^2 <= r^2`` is the same
as ``|x|^2 <= floor(r^2)``.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import product
from math import floor, isqrt
from numbers import Rational
from typing import Iterator, Sequence

from .errors import BudgetExceededError, DomainError
from .exact import Vector
from .polytope import ConvexLatticePolytope, convex_hull

SHAPES = ("simplex", "ball", "orthant-ball", "paraboloid")
DEFAULT_BUDGET = 10**8


def point_budget() -> int:
    """Lattice-point budget, overridable by ``LATTICEFORGE_BUDGET``."""
    env = os.environ.get("LATTICEFORGE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def as_radius(r) -> Fraction:
    if isinstance(r, float):
        raise DomainError("radii must be exact (int, Fraction or 'p/q' string)")
    if isinstance(r, str):
        r = Fraction(r)
    if not isinstance(r, Rational):
        raise DomainError(f"unsupported radius {r!r}")
    r = Fraction(r)
    if r <= 0:
        raise DomainError("radius must be positive")
    return r


def squared_bound(r) -> int:
    """``floor(r^2)``: the integer bound on squared norms inside ``r B^d``."""
    r = as_radius(r)
    return floor(r * r)


def _columns(shape: str, d: int, r) -> Iterator[tuple[Vector, int, int]]:
    """Yield ``(prefix, lo, hi)``: the lattice column over ``prefix`` along
    the last axis is ``lo..hi`` (inclusive, nonempty)."""
    if d < 2 and shape == "paraboloid":
        raise DomainError("the paraboloid needs d >= 2")
    if shape == "simplex":
        n = floor(as_radius(r))
        yield from _simplex_columns(d, n)
    elif shape in ("ball", "orthant-ball"):
        nsq = squared_bound(r)
        positive = shape == "orthant-ball"
        for prefix, s in _ball_prefixes(d - 1, nsq, positive):
            h = isqrt(nsq - s)
            yield prefix, (0 if positive else -h), h
    elif shape == "paraboloid":
        top = squared_bound(r)
        for prefix, s in _ball_prefixes(d - 1, top, True):
            yield prefix, s, top
    else:
        raise DomainError(f"unsupported region {shape!r}; expected one of {SHAPES}")


def _simplex_columns(d: int, n: int) -> Iterator[tuple[Vector, int, int]]:
    def rec(prefix: tuple[int, ...], left: int):
        if len(prefix) == d - 1:
            yield prefix, 0, left
            return
        for x in range(left + 1):
            yield from rec(prefix + (x,), left - x)
    if n < 0:
        return
    yield from rec((), n)


def _ball_prefixes(k: int, nsq: int, positive: bool) -> Iterator[tuple[Vector, int]]:
    """Integer vectors of length ``k`` with squared norm ``<= nsq``."""
    def rec(prefix: tuple[int, ...], s: int):
        if len(prefix) == k:
            yield prefix, s
            return
        h = isqrt(nsq - s)
        for x in range(0 if positive else -h, h + 1):
            yield from rec(prefix + (x,), s + x * x)
    yield from rec((), 0)


def count_points(shape: str, d: int, r) -> int:
    return sum(hi - lo + 1 for _, lo, hi in _columns(shape, d, r))


def lattice_points(region, d: int, r=None) -> list[Vector]:
    """All lattice points of a closed region, lexicographically sorted.

    ``region`` is a shape tag from ``SHAPES`` (with radius/size ``r``) or a
    ``ConvexLatticePolytope``.
    """
    if isinstance(region, ConvexLatticePolytope):
        lo = [min(v[j] for v in region.vertices) for j in range(d)]
        hi = [max(v[j] for v in region.vertices) for j in range(d)]
        return [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
                if region.contains(p)]
    out = []
    for prefix, lo, hi in _columns(region, d, r):
        out.extend(prefix + (z,) for z in range(lo, hi + 1))
    out.sort()
    return out


def contains(shape: str, d: int, r, point: Sequence[int]) -> bool:
    """Exact membership of a lattice point in the closed region."""
    p = tuple(point)
    if shape == "simplex":
        return min(p) >= 0 and sum(p) <= as_radius(r)
    if shape == "ball":
        return sum(x * x for x in p) <= squared_bound(r)
    if shape == "orthant-ball":
        return min(p) >= 0 and sum(x * x for x in p) <= squared_bound(r)
    if shape == "paraboloid":
        return min(p) >= 0 and sum(x * x for x in p[:-1]) <= p[-1] <= squared_bound(r)
    raise DomainError(f"unsupported region {shape!r}")


def hull_candidates(shape: str, d: int, r, exclude=frozenset(),
                    budget: int | None = None) -> list[Vector]:
    """A subset of the region's lattice points with the same convex hull.

    Takes the two ends of every lattice column along the last axis (after
    removing ``exclude``, whose points must sit at column ends), then drops
    points that are not vertices of the planar hull of their
    ``(x_j, x_d)`` slice.
    """
    budget = point_budget() if budget is None else budget
    total = count_points(shape, d, r)
    if total > budget:
        raise BudgetExceededError(
            f"{shape} d={d} r={r} has {total} lattice points, budget {budget}", total)
    cands = set()
    for prefix, lo, hi in _columns(shape, d, r):
        while lo <= hi and prefix + (lo,) in exclude:
            lo += 1
        while hi >= lo and prefix + (hi,) in exclude:
            hi -= 1
        if lo > hi:
            continue
        cands.add(prefix + (lo,))
        cands.add(prefix + (hi,))
    if d >= 3:
        for j in range(d - 1):
            cands = _slice_filter(cands, j, d)
    return sorted(cands)


def _slice_filter(cands: set[Vector], j: int, d: int) -> set[Vector]:
    # keeping only planar-slice vertices never drops a vertex of the full hull
    slices: dict[tuple, list[Vector]] = {}
    for p in cands:
        key = p[:j] + p[j + 1:d - 1]
        slices.setdefault(key, []).append(p)
    kept = set()
    for pts in slices.values():
        if len(pts) <= 2:
            kept.update(pts)
            continue
        plane = {(p[j], p[d - 1]): p for p in pts}
        sub = convex_hull(plane.keys(), 2)
        kept.update(plane[v] for v in sub.vertices)
    return kept


def region_hull(shape: str, d: int, r, exclude=frozenset(),
                 budget: int | None = None) -> ConvexLatticePolytope:
    """``conv`` of the region's lattice points (minus ``exclude``)."""
    return convex_hull(hull_candidates(shape, d, r, exclude, budget), d)
