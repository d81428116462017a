"""Many pairwise non-equivalent lattice polytopes of one common volume.

Start from ``Q^r``, the integer hull of the non-negative part of ``r B^d``,
and its positive vertices ``X``. Removing any ``Z ⊆ X`` gives a polytope
``Q(Z)``; cutting a suitable corner ``P(Z)`` out of the origin copy of
``S(rho)`` brings each of them to the same volume ``V = vol Q(X)``.
Equivalence is tested up to axis permutations via canonical forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, floor, log
from typing import Iterable, Sequence

from .construction import construct_missed, threshold
from .errors import BudgetExceededError, DomainError, InvariantViolation
from .exact import Vector, dot
from .parallel import pmap
from .polytope import (ConvexLatticePolytope, axis_point, canonical_form,
                       convex_hull, edges, normalized_volume)
from .regions import as_radius, region_hull, squared_bound

CENSUS_BUDGET = 2**20


class InfeasibleFamilyError(DomainError):
    """No corner scale ``rho`` can absorb the largest trim."""

    def __init__(self, message: str, m_max: int, cap: Fraction):
        super().__init__(message)
        self.m_max = m_max
        self.cap = cap


@dataclass(frozen=True)
class FamilySpec:
    d: int
    r: Fraction
    rho: int
    X: tuple[Vector, ...]
    v_target: int
    m_max: int
    markers: tuple[Vector, ...] = ()
    t: int = 0
    edge_threshold: Fraction = Fraction(0)
    invariants: dict = field(default_factory=dict)

    @property
    def V_target(self) -> Fraction:
        return Fraction(self.v_target, factorial(self.d))

    @property
    def marked(self) -> bool:
        return bool(self.markers)

    def subset(self, mask: int) -> frozenset[Vector]:
        return frozenset(x for k, x in enumerate(self.X) if mask >> k & 1)

    def implied_exponent(self) -> float:
        """``log(|X| log 2) / log V``: the exponent of ``V`` that ``log 2^|X|`` realizes."""
        return log(len(self.X) * log(2)) / log(float(self.V_target))


@dataclass(frozen=True)
class TrimmedPolytope:
    Z: frozenset[Vector]
    Q_Z: ConvexLatticePolytope
    m_Z: int
    P_star: ConvexLatticePolytope
    canonical: tuple[Vector, ...]


def marker_points(d: int, t: int) -> tuple[Vector, ...]:
    """``t e_i, (t-1) e_i, ..., (t-i+1) e_i`` for ``i = 1..d``."""
    return tuple(axis_point(d, i, t - k) for i in range(d) for k in range(i + 1))


def _removed_hull(d: int, r: Fraction, removed: Iterable[Vector]) -> ConvexLatticePolytope:
    # removed points are column ends along the last axis, as region_hull expects
    return region_hull("orthant-ball", d, r, exclude=frozenset(removed))


def choose_rho(d: int, m_max: int, cap: Fraction) -> int:
    """Smallest ``rho > 2^d d!`` with ``(rho - 2^d d!)^d >= m_max``, if ``<= cap``."""
    r0 = threshold(d)
    rho = r0 + 1
    while (rho - r0) ** d < m_max:
        rho += 1
    if rho > cap:
        raise InfeasibleFamilyError(
            f"need rho = {rho} to absorb m_max = {m_max}, above the cap {cap}", m_max, cap)
    return rho


def base_family(d: int, r, markers: bool = False) -> FamilySpec:
    """Family data for ``Q^r``, with the marker points removed if requested."""
    if d not in (2, 3):
        raise DomainError("the family is built for d in {2, 3}")
    r = as_radius(r)
    q0 = region_hull("orthant-ball", d, r)
    X = tuple(v for v in q0.vertices if min(v) > 0)
    t = floor(r)
    marks = marker_points(d, t) if markers else ()
    if marks:
        nsq = squared_bound(r)
        for p in marks:
            if min(p) < 0 or dot(p, p) > nsq:
                raise DomainError(f"marker {p} is not a lattice point of Q^r")
    q_empty = _removed_hull(d, r, marks)
    q_full = _removed_hull(d, r, set(X) | set(marks))
    v_target = normalized_volume(q_full)
    m_max = normalized_volume(q_empty) - v_target
    cap = r / 4
    rho = choose_rho(d, m_max, cap)
    corner_ok = all(q_full.contains(p) for p in [(0,) * d] + [axis_point(d, i, rho) for i in range(d)])
    inv = {
        "rho > 2^d d!": rho > threshold(d),
        "S(rho) in Q(X)": corner_ok,
        "m_max <= (rho - 2^d d!)^d": m_max <= (rho - threshold(d)) ** d,
    }
    if not all(inv.values()):
        raise InvariantViolation(f"family invariants failed: {inv}", dict(d=d, r=r))
    edge_thr = Fraction(9, 10) * r
    if rho > r / 10:
        # axis edges run from at most rho to at least t - d
        edge_thr = min(edge_thr, Fraction(t - d - rho) - Fraction(1, 2))
    return FamilySpec(d, r, rho, X, v_target, m_max, marks, t, edge_thr, inv)


def find_feasible_radius(d: int, start: int = 100, stop: int = 1000,
                         markers: bool = True) -> int:
    """Smallest integer ``r >= start`` whose (marked) family is feasible."""
    for r in range(start, stop + 1):
        try:
            base_family(d, r, markers=markers)
            if markers:
                base_family(d, r)
            return r
        except InfeasibleFamilyError:
            continue
    raise DomainError(f"no feasible radius in [{start}, {stop}]")


def subset_hull(spec: FamilySpec, Z: Iterable[Vector]) -> ConvexLatticePolytope:
    """``Q(Z) = I(Q^r \\ Z)`` (markers removed too for a marked spec)."""
    Z = frozenset(Z)
    if not Z <= set(spec.X):
        raise DomainError("Z must be a subset of the positive vertices")
    return _removed_hull(spec.d, spec.r, Z | set(spec.markers))


@lru_cache(maxsize=4096)
def _corner(d: int, rho: int, m: int) -> ConvexLatticePolytope:
    return construct_missed(d, rho, m).polytope


def trim_to_volume(spec: FamilySpec, Z: Iterable[Vector]) -> TrimmedPolytope:
    """Replace the ``S(rho)`` corner of ``Q(Z)`` so the volume drops to ``v_target``."""
    Z = frozenset(Z)
    qz = subset_hull(spec, Z)
    m = normalized_volume(qz) - spec.v_target
    if m < 0:
        raise InvariantViolation("Q(Z) smaller than the target volume", dict(Z=sorted(Z), m=m))
    corner = _corner(spec.d, spec.rho, m)
    origin = (0,) * spec.d
    pts = [v for v in qz.vertices if v != origin] + list(corner.vertices)
    star = convex_hull(pts, spec.d)
    if normalized_volume(star) != spec.v_target:
        raise InvariantViolation(
            f"trimmed volume {normalized_volume(star)} != {spec.v_target}",
            dict(Z=sorted(Z), m_Z=m))
    return TrimmedPolytope(Z, qz, m, star, canonical_form(star))


def marker_variant(spec: FamilySpec, Z: Iterable[Vector]) -> TrimmedPolytope:
    """Trim ``Z^0 = Z ∪ markers``; ``spec`` must be a marked family."""
    if not spec.marked:
        raise DomainError("marker_variant needs a spec built with markers=True")
    return trim_to_volume(spec, Z)


def long_edges(poly: ConvexLatticePolytope, r, threshold: Fraction | None = None
               ) -> list[tuple[Vector, Vector]]:
    """Edges longer than ``threshold`` (default ``0.9 r``), compared exactly."""
    thr = Fraction(9, 10) * as_radius(r) if threshold is None else Fraction(threshold)
    out = []
    for a, b in edges(poly):
        diff = [x - y for x, y in zip(a, b)]
        if dot(diff, diff) > thr * thr:
            out.append((a, b))
    return out


def check_long_edges(spec: FamilySpec, tp: TrimmedPolytope) -> list[str]:
    """Exactly ``d`` long edges, one on each axis, starting within ``S(rho)``."""
    found = long_edges(tp.P_star, spec.r, spec.edge_threshold)
    bad = []
    if len(found) != spec.d:
        bad.append(f"{len(found)} long edges, expected {spec.d}")
    axes = set()
    for a, b in found:
        support = {k for k in range(spec.d) if a[k] or b[k]}
        if len(support) != 1:
            bad.append(f"long edge {a}-{b} is not on an axis")
            continue
        k = support.pop()
        axes.add(k)
        if min(a[k], b[k]) > spec.rho:
            bad.append(f"long edge {a}-{b} starts beyond rho")
    if len(axes) != len(found):
        bad.append("two long edges share an axis")
    return bad


@dataclass(frozen=True)
class CensusRow:
    mask: int
    m_Z: int
    f0: int
    distinct: bool
    edges_ok: bool


@dataclass(frozen=True)
class CensusReport:
    spec: FamilySpec
    rows: tuple[CensusRow, ...]
    generated: int
    distinct: int
    max_class: int
    volumes_ok: bool
    sampled: bool
    seed: int | None

    @property
    def ratio(self) -> float:
        return self.distinct / self.generated if self.generated else 0.0

    def classes_bounded(self) -> bool:
        return self.max_class <= factorial(self.spec.d)


def _census_item(args) -> tuple[int, int, int, tuple, bool, bool]:
    spec, mask = args
    tp = trim_to_volume(spec, spec.subset(mask))
    ok = normalized_volume(tp.P_star) == spec.v_target
    return mask, tp.m_Z, tp.P_star.f0, tp.canonical, ok, not check_long_edges(spec, tp)


def census(spec: FamilySpec, budget: int = CENSUS_BUDGET, sample: int | None = None,
           seed: int = 0, jobs: int = 1, masks: Sequence[int] | None = None,
           check_edges: bool = True) -> CensusReport:
    """Trim every subset (or a seeded uniform sample) and dedup by canonical form."""
    total = 2 ** len(spec.X)
    sampled = False
    if masks is None:
        if sample is not None and sample < total:
            rng = random.Random(seed)
            masks = sorted(rng.sample(range(total), sample)) if total <= 2**62 else \
                sorted({rng.getrandbits(len(spec.X)) for _ in range(sample)})
            sampled = True
        elif total > budget:
            raise BudgetExceededError(
                f"2^{len(spec.X)} = {total} subsets exceed the budget {budget}; "
                "request a sample", total)
        else:
            masks = range(total)
    else:
        sampled = True
    results = pmap(_census_item, [(spec, m) for m in masks], jobs)
    classes: dict[tuple, int] = {}
    rows = []
    for mask, m, f0, canon, ok, edges_ok in results:
        first = canon not in classes
        classes[canon] = classes.get(canon, 0) + 1
        rows.append(CensusRow(mask, m, f0, first, edges_ok or not check_edges))
    return CensusReport(spec, tuple(rows), len(rows), len(classes),
                        max(classes.values(), default=0),
                        all(r[4] for r in results), sampled, seed if sampled else None)
