"""Achievable normalized volumes in the family ``A(r) ⊆ P ⊆ S(r)``.

Two enumerations are provided. The exhaustive one walks every hull
reachable from ``A(r)`` by adjoining lattice points of ``S(r)``; the
layered one only adjoins points of the layer ``A_{r-1}`` (coordinate sum
``r - 1``) and enumerates the distinct lattice polygons they span. A
polytope reaching any deeper layer already has ``v >= 2 r^{d-1}``, which
is what makes the layered enumeration enough to certify small gaps.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .errors import BudgetExceededError, DomainError, TheoremViolation
from .exact import Vector
from .parallel import pmap
from .polytope import (ConvexLatticePolytope, convex_hull, face_vertices,
                       in_family, normalized_volume)

EXHAUSTIVE_POINT_BUDGET = 64
LAYERED_EXHAUSTIVE_MAX = 28


@dataclass(frozen=True)
class ValueSetReport:
    d: int
    r: int
    strategy: str
    achieved: tuple[int, ...]
    witnesses: dict = field(repr=False)
    states: int = 0
    certifying: bool = True
    classes: dict = field(default_factory=dict, repr=False)
    cap: int | None = None

    @property
    def gaps(self) -> list[tuple[int, int]]:
        """Maximal integer intervals in ``[0, r^d]`` (or ``[0, cap)``) not achieved."""
        top = self.r**self.d if self.cap is None else self.cap - 1
        return missing_intervals(self.achieved, 0, top)

    def witness_polytope(self, v: int) -> ConvexLatticePolytope:
        return convex_hull(list(face_vertices(self.d, self.r)) + list(self.witnesses[v]), self.d)


def missing_intervals(values: Iterable[int], lo: int, hi: int) -> list[tuple[int, int]]:
    vs = sorted(v for v in set(values) if lo <= v <= hi)
    out = []
    prev = lo - 1
    for v in vs + [hi + 1]:
        if v > prev + 1:
            out.append((prev + 1, v - 1))
        prev = v
    return out


def layer(d: int, k: int) -> list[Vector]:
    """``A_k``: non-negative lattice points with coordinate sum ``k``."""
    def rec(prefix, left):
        if len(prefix) == d - 1:
            yield prefix + (left,)
            return
        for x in range(left + 1):
            yield from rec(prefix + (x,), left - x)
    return sorted(rec((), k)) if k >= 0 else []


# --- exhaustive -------------------------------------------------------------

def value_set_exhaustive(d: int, r: int, point_budget: int = EXHAUSTIVE_POINT_BUDGET
                         ) -> ValueSetReport:
    """Every value ``v(conv(A(r) ∪ T))`` for ``T`` a set of lattice points of ``S(r)``."""
    if d < 2 or r < 1:
        raise DomainError("need d >= 2 and r >= 1")
    below = [p for k in range(r) for p in layer(d, k)]
    if len(below) > point_budget:
        raise BudgetExceededError(
            f"{len(below)} lattice points below A({r}) exceed the budget {point_budget}; "
            "use the layered strategy", len(below))
    start = convex_hull(face_vertices(d, r), d)
    seen = {start.vertices: start}
    queue = deque([start])
    while queue:
        poly = queue.popleft()
        for p in below:
            if poly.contains(p):
                continue
            nxt = convex_hull(poly.vertices + (p,), d)
            if nxt.vertices not in seen:
                seen[nxt.vertices] = nxt
                queue.append(nxt)
    witnesses: dict[int, tuple] = {}
    for verts, poly in sorted(seen.items()):
        witnesses.setdefault(normalized_volume(poly), verts)
    return ValueSetReport(d, r, "exhaustive", tuple(sorted(witnesses)), witnesses, len(seen))


# --- layered ----------------------------------------------------------------

def _lift(y: Sequence[int], r: int) -> Vector:
    return tuple(y) + (r - 1 - sum(y),)


class _Layer:
    """``A_{r-1}`` in the first ``d-1`` coordinates, with saturation by bitmask."""

    def __init__(self, d: int, r: int):
        self.d, self.r = d, r
        self.points = [p[:-1] for p in layer(d, r - 1)]
        self.index = {p: i for i, p in enumerate(self.points)}

    def saturate(self, pts: Sequence[Vector]) -> tuple[int, tuple[Vector, ...]]:
        """Bitmask of layer points in ``conv(pts)`` and the hull's vertices."""
        hull = convex_hull(pts, self.d - 1)
        mask = 0
        for i, p in enumerate(self.points):
            if hull.contains(p):
                mask |= 1 << i
        return mask, hull.vertices

    def members(self, mask: int) -> list[Vector]:
        return [p for i, p in enumerate(self.points) if mask >> i & 1]


def _layered_volume(args) -> int:
    d, r, verts = args
    return normalized_volume(convex_hull(face_vertices(d, r) + [_lift(y, r) for y in verts], d))


def value_set_layered(d: int, r: int, cap: int | None = None, sample: int | None = None,
                      seed: int = 0, jobs: int = 1) -> ValueSetReport:
    """Values of ``conv(A(r) ∪ B)`` over all ``B ⊆ A_{r-1}``.

    Distinct hulls are enumerated once each, keyed by the set of layer
    points they contain. With ``cap``, states of volume ``>= cap`` are not
    expanded; since volume only grows with ``B``, every value below ``cap``
    is still found. ``sample`` switches to seeded random subsets, which is
    reported as non-certifying.
    """
    if d < 2 or r < 2:
        raise DomainError("need d >= 2 and r >= 2")
    lay = _Layer(d, r)
    n = len(lay.points)
    vol: dict[int, int] = {}
    verts_of: dict[int, tuple] = {}
    if sample is not None or n > LAYERED_EXHAUSTIVE_MAX and cap is None:
        if sample is None:
            raise BudgetExceededError(
                f"|A_{r - 1}| = {n} is too large for exhaustive subsets; request a sample", n)
        rng = random.Random(seed)
        for _ in range(sample):
            k = rng.randint(1, n)
            mask, verts = lay.saturate(rng.sample(lay.points, k))
            verts_of.setdefault(mask, verts)
        for mask, v in zip(verts_of, pmap(_layered_volume,
                                           [(d, r, verts_of[m]) for m in verts_of], jobs)):
            vol[mask] = v
        certifying = False
    else:
        frontier = []
        for p in lay.points:
            m = 1 << lay.index[p]
            verts_of[m] = (p,)
            frontier.append(m)
        while frontier:
            vals = pmap(_layered_volume, [(d, r, verts_of[m]) for m in frontier], jobs)
            nxt = []
            for m, v in zip(frontier, vals):
                vol[m] = v
                if cap is not None and v >= cap:
                    continue
                for i, p in enumerate(lay.points):
                    if m >> i & 1:
                        continue
                    s, verts = lay.saturate(verts_of[m] + (p,))
                    if s not in verts_of:
                        verts_of[s] = verts
                        nxt.append(s)
            frontier = nxt
        certifying = True
    witnesses: dict[int, tuple] = {}
    classes: dict[tuple[int, int], set[int]] = {}
    for m in sorted(vol):
        v = vol[m]
        if cap is not None and v >= cap:
            continue
        members = lay.members(m)
        witnesses.setdefault(v, tuple(_lift(y, r) for y in verts_of[m]))
        key = (len(members), q_value([_lift(y, r) for y in members]))
        classes.setdefault(key, set()).add(v)
    return ValueSetReport(d, r, "layered" if certifying else "layered-sampled",
                          tuple(sorted(witnesses)), witnesses, len(vol), certifying,
                          classes, cap)


def prismatoid_volume(r: int, B: Sequence[Vector]) -> int:
    """``v(conv(A(r) ∪ B))`` for ``B ⊆ A_{r-1}`` in ``d = 3`` from planar areas.

    The polytope spans two adjacent lattice planes, so its normalized volume
    is ``(a(T) + a(B) + a(T + B)) / 2`` with ``a`` twice the planar area of
    the projections to the first two coordinates.
    """
    T = [(0, 0), (r, 0), (0, r)]
    b = [tuple(p[:2]) for p in B]
    tb = [(t[0] + s[0], t[1] + s[1]) for t in T for s in b]
    total = _twice_area(T) + _twice_area(b) + _twice_area(tb)
    if total % 2:
        raise TheoremViolation("prismatoid volume is not an integer", (r, tuple(B)))
    return total // 2


def _twice_area(pts: Sequence[Vector]) -> int:
    poly = convex_hull(pts, 2)
    return normalized_volume(poly) if poly.dim == 2 else 0


# --- deep layers ------------------------------------------------------------

@dataclass(frozen=True)
class DeepLayerBound:
    d: int
    r: int
    minimum: int
    argmin: Vector
    bound: int

    @property
    def holds(self) -> bool:
        return self.minimum >= self.bound


def deep_layer_bound(d: int, r: int) -> DeepLayerBound:
    """Minimum of ``v(conv(A(r) ∪ {b}))`` over ``b`` with coordinate sum ``<= r - 2``.

    Every ``P`` in the family meeting a layer ``A_k`` with ``k <= r - 2``
    contains such a cone, so its volume is at least this minimum. Points are
    taken up to coordinate permutation.
    """
    if r < 2:
        raise DomainError("need r >= 2")
    best = None
    for k in range(r - 1):
        for b in combinations_with_replacement(range(k + 1), d):
            if sum(b) != k:
                continue
            v = normalized_volume(convex_hull(face_vertices(d, r) + [b], d))
            if best is None or v < best[0]:
                best = (v, b)
    return DeepLayerBound(d, r, best[0], best[1], 2 * r ** (d - 1))


# --- q statistic ------------------------------------------------------------

def q_matrix(B: Sequence[Vector]) -> list[list[int]]:
    return [[max(abs(a - b) for a, b in zip(u, v)) for v in B] for u in B]


def q_value(B: Sequence[Vector]) -> int:
    return max((max(abs(a - b) for a, b in zip(u, v)) for u, v in combinations(B, 2)), default=0)


@dataclass(frozen=True)
class QStatistic:
    matrix: tuple[tuple[int, ...], ...]
    q: int
    adjacency: tuple[tuple[int, int], ...]


def q_statistic(B: Sequence[Vector]) -> QStatistic:
    """Pairwise ``max_j |b^i_j - b^k_j|``, its maximum and the ``q = 1`` pairs."""
    B = [tuple(b) for b in B]
    mat = q_matrix(B)
    adj = tuple((i, k) for i, k in combinations(range(len(B)), 2) if mat[i][k] == 1)
    return QStatistic(tuple(map(tuple, mat)), q_value(B), adj)


def grid_distances(r: int) -> dict[Vector, dict[Vector, int]]:
    """All-pairs BFS distances in the triangular grid graph on ``A_{r-1}`` (d = 3)."""
    pts = layer(3, r - 1)
    pset = set(pts)
    steps = [s for s in ((1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1))]
    out = {}
    for src in pts:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for s in steps:
                w = (u[0] + s[0], u[1] + s[1], u[2] + s[2])
                if w in pset and w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        out[src] = dist
    return out


def validate_q_metric(r: int) -> bool:
    """Graph distance equals the q statistic for every pair in ``A_{r-1}``."""
    dist = grid_distances(r)
    return all(dist[u][v] == q_value([u, v]) for u in dist for v in dist)


# --- gap theorems -----------------------------------------------------------

def theorem_intervals(r: int) -> list[tuple[str, int, int]]:
    """The claimed empty intervals for ``d = 3``."""
    return [
        ("gap-1", r * r + 1, r * r + r - 1),
        ("gap-2", r * r + r + 2, r * r + 2 * r - 1),
        ("gap-3", r * r + 2 * r + 5, r * r + 3 * r - 1),
    ]


def gap_interval_d(d: int, r: int) -> tuple[int, int]:
    """``[r^{d-1} + 1, r^{d-1} + r^{d-2} - 1]``."""
    return r ** (d - 1) + 1, r ** (d - 1) + r ** (d - 2) - 1


@dataclass(frozen=True)
class IntervalCertificate:
    name: str
    lo: int
    hi: int
    status: str  # empty | violated | achieved | missing
    witnesses: dict

    def as_dict(self) -> dict:
        return {"name": self.name, "interval": [self.lo, self.hi], "status": self.status,
                "witnesses": {str(v): [list(p) for p in w] for v, w in self.witnesses.items()}}


@dataclass(frozen=True)
class GapCertificate:
    d: int
    r: int
    intervals: tuple[IntervalCertificate, ...]
    deep: DeepLayerBound
    states: int

    @property
    def ok(self) -> bool:
        return self.deep.holds and all(c.status in ("empty", "achieved") for c in self.intervals)

    def as_dict(self) -> dict:
        return {"d": self.d, "r": self.r, "ok": self.ok, "states": self.states,
                "deep_layer": {"min": self.deep.minimum, "bound": self.deep.bound,
                               "argmin": list(self.deep.argmin)},
                "intervals": [c.as_dict() for c in self.intervals]}


def _check_empty(name: str, lo: int, hi: int, report: ValueSetReport) -> IntervalCertificate:
    hits = {v: report.witnesses[v] for v in report.achieved if lo <= v <= hi}
    return IntervalCertificate(name, lo, hi, "violated" if hits else "empty", hits)


def verify_gap_theorems(r: int, jobs: int = 1, raise_on_violation: bool = False
                        ) -> GapCertificate:
    """Certify the three ``d = 3`` gaps and the achieved run ``[r^2+2r, r^2+2r+4]``.

    Shallow polytopes (all of ``P ∩ A_{r-2}`` empty) are covered by the
    exhaustive layered enumeration; deep ones by ``deep_layer_bound``,
    whose minimum ``2 r^2`` lies above every interval for ``r >= 3``.
    """
    if r < 6:
        raise DomainError("the gap theorems are certified for r >= 6")
    report = value_set_layered(3, r, jobs=jobs)
    if not report.certifying:
        raise DomainError("layered enumeration was sampled; cannot certify")
    deep = deep_layer_bound(3, r)
    certs = [_check_empty(n, lo, hi, report) for n, lo, hi in theorem_intervals(r)]
    lo, hi = r * r + 2 * r, r * r + 2 * r + 4
    wit = corollary_witnesses(r)
    status = "achieved" if all(v in wit and v in report.achieved for v in range(lo, hi + 1)) \
        else "missing"
    certs.append(IntervalCertificate("run", lo, hi, status, wit))
    top = max(hi for _, _, hi in theorem_intervals(r))
    if deep.minimum <= top:
        certs.append(IntervalCertificate("deep", top, top, "violated", {deep.minimum: (deep.argmin,)}))
    cert = GapCertificate(3, r, tuple(certs), deep, report.states)
    if raise_on_violation and not cert.ok:
        raise TheoremViolation(f"gap certificate failed for r={r}", cert.as_dict())
    return cert


def verify_gap_d(d: int, r: int, jobs: int = 1) -> IntervalCertificate:
    """The first gap ``[r^{d-1}+1, r^{d-1}+r^{d-2}-1]`` in dimension ``d``."""
    lo, hi = gap_interval_d(d, r)
    report = value_set_layered(d, r, cap=hi + 1, jobs=jobs)
    deep = deep_layer_bound(d, r)
    cert = _check_empty(f"gap-1[d={d}]", lo, hi, report)
    if deep.minimum <= hi:
        return IntervalCertificate(cert.name, lo, hi, "violated", {deep.minimum: (deep.argmin,)})
    return cert


def corollary_witnesses(r: int) -> dict[int, tuple[Vector, ...]]:
    """Explicit ``B ⊆ A_{r-1}`` with ``v(conv(A(r) ∪ B)) = r^2 + 2r + k``, ``k = 0..4``.

    Case 1 puts ``b_1, b_2`` at distance 2 along a side of the layer
    triangle with midpoint ``o`` and adds points one step deeper into the
    triangle; Case 2 puts them across a rhombus and adds its short diagonal.
    Every claimed volume is verified exactly.
    """
    if r < 6:
        raise DomainError("the witness configurations need r >= 6")

    def add(p, s):
        return tuple(a + b for a, b in zip(p, s))

    b1 = (2, 1, r - 4)
    b2 = (0, 3, r - 4)
    o = (1, 2, r - 4)
    c4, c5, c6 = add(o, (-1, 0, 1)), add(o, (0, -1, 1)), add(o, (-1, -1, 2))
    e1 = (0, 1, r - 2)
    e2 = add(e1, (1, 1, -2))
    d2, d3 = add(e1, (0, 1, -1)), add(e1, (1, 0, -1))
    base = r * r + 2 * r
    configs = {
        base: (b1, b2, o),
        base + 1: (e1, e2, d2),
        base + 2: (b1, b2, c4),
        base + 3: (b1, b2, c4, c5),
        base + 4: (b1, b2, c6),
    }
    extra = {base + 1: [(e1, e2, d3)], base + 2: [(b1, b2, c5), (e1, e2, d2, d3)]}
    out = {}
    for v, B in configs.items():
        for cand in [B] + extra.get(v, []):
            got = normalized_volume(convex_hull(face_vertices(3, r) + list(cand), 3))
            if got != v:
                raise TheoremViolation(f"witness {cand} has volume {got}, claimed {v}",
                                       dict(r=r, B=cand))
        out[v] = B
    return out


def case_table(report: ValueSetReport) -> dict[str, bool]:
    """Check the layered values against the ``(|B|, q)`` case table (d = 3)."""
    r = report.r
    r2 = r * r
    checks = {}
    for (size, q), vals in sorted(report.classes.items()):
        if size == 1:
            ok = vals == {r2}
            key = "|B|=1"
        elif size == 2:
            ok = vals == {r2 + q * r}
            key = f"|B|=2,q={q}"
        elif q == 1:
            ok = vals <= {r2 + r + 1, r2 + 2 * r + 1}
            key = f"|B|={size},q=1"
        elif q == 2:
            ok = all(r2 + 2 * r <= v <= r2 + 2 * r + 4 or v >= r2 + 3 * r for v in vals)
            key = f"|B|={size},q=2"
        else:
            ok = all(v >= r2 + 3 * r for v in vals)
            key = f"|B|={size},q={q}"
        checks[key] = checks.get(key, True) and ok
    pairs = set().union(*(vals for (s, _), vals in report.classes.items() if s == 2))
    checks["|B|=2 covers r^2+kr"] = pairs == {r2 + k * r for k in range(1, r)}
    return checks


def revalidate_witnesses(report: ValueSetReport) -> bool:
    """Every witness is a family member with the recorded volume."""
    for v in report.achieved:
        poly = report.witness_polytope(v)
        if not in_family(poly, report.d, report.r) or normalized_volume(poly) != v:
            return False
    return True
