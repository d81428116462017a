"""Polytopes of the family P^d(r) with a prescribed missed volume.

For ``m <= r`` a thin corner simplex is cut from ``S(r)``. Larger ``m`` are
decomposed greedily (see ``decomposition``) and the simplices
``Delta_0, ..., Delta_d`` are peeled off ``S(r)`` one corner at a time. Every
step is verified with exact volumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .decomposition import GreedyDecomposition, decompose, g_derivative
from .errors import DomainError, InvariantViolation, OutOfRangeError
from .exact import Vector
from .polytope import (ConvexLatticePolytope, axis_point, convex_hull,
                       corner_simplex, face_vertices, in_family,
                       normalized_volume, simplex_volume)


def threshold(d: int) -> int:
    """``2^d d!``: the radius beyond which the peeling construction applies."""
    return 2**d * factorial(d)


@dataclass(frozen=True)
class SimplexSpec:
    index: int
    vertices: tuple[Vector, ...]
    claimed: int


@dataclass(frozen=True)
class PeelingSequence:
    """``S(r) = P_{-1} ⊇ P_0 ⊇ ... ⊇ P_k``; step ``i`` removes ``deltas[i]``."""

    d: int
    r: int
    deltas: tuple[SimplexSpec, ...]
    polytopes: tuple[ConvexLatticePolytope, ...]
    Y: tuple[Vector, ...] = ()
    X: tuple[tuple[Vector, ...], ...] = ()


@dataclass(frozen=True)
class Construction:
    polytope: ConvexLatticePolytope
    method: str
    sequence: PeelingSequence | None = None
    decomposition: GreedyDecomposition | None = None
    params: dict = field(default_factory=dict)

    def __iter__(self):
        # allows ``poly, seq = construct_missed(...)``
        yield self.polytope
        yield self.sequence if self.sequence is not None else self.method


def _add(u: Vector, v: Vector, k: int = 1) -> Vector:
    return tuple(a + k * b for a, b in zip(u, v))


def _unit(d: int, i: int) -> Vector:
    return axis_point(d, i, 1)


def thin_cut(d: int, r: int, m: int) -> ConvexLatticePolytope:
    """``S(r)`` minus the corner simplex ``conv{0, m e_1, e_2, ..., e_d}``.

    Equivalently ``S(r) ∩ {x_1 + m (x_2 + ... + x_d) >= m}``; its normalized
    volume is ``r^d - m``.
    """
    if not 0 <= m <= r:
        raise OutOfRangeError(f"thin cut needs 0 <= m <= r, got m={m}, r={r}")
    if m == 0:
        return corner_simplex(d, r)
    pts = [axis_point(d, 0, m)] + [_unit(d, j) for j in range(1, d)]
    pts += face_vertices(d, r)
    poly = convex_hull(pts, d)
    v = normalized_volume(poly)
    if v != r**d - m:
        raise InvariantViolation(f"thin cut volume {v} != {r**d - m}", (d, r, m))
    return poly


def thin_cut_sequence(d: int, r: int, m: int) -> PeelingSequence:
    """The thin cut viewed as a one-step peeling sequence."""
    poly = thin_cut(d, r, m)
    cut = (tuple([(0,) * d, axis_point(d, 0, m)] + [_unit(d, j) for j in range(1, d)])
           if m else ((0,) * d,) * (d + 1))
    spec = SimplexSpec(0, cut, m)
    return PeelingSequence(d, r, (spec,), (poly,), tuple(face_vertices(d, r)))


def build_delta(d: int, r: int, i: int, x0: int, h: int = 0) -> SimplexSpec:
    """Simplex ``Delta_i`` of the peeling construction.

    ``h`` is ``x_i`` for ``1 <= i <= d-1`` and ``m_d`` for ``i = d``; it is
    ignored for ``i = 0``.
    """
    r0 = threshold(d)
    checks = [
        (r > r0, f"r > 2^d d! = {r0}"),
        (x0 >= 1, "x_0 >= 1"),
        (2 * x0 <= r - r0, f"2 x_0 <= r - 2^d d! = {r - r0}"),
        (0 <= i <= d, f"0 <= i <= {d}"),
    ]
    if 1 <= i <= d - 1:
        checks.append((0 <= h <= x0, f"0 <= x_i <= x_0 = {x0}"))
    elif i == d:
        checks.append((0 <= h <= r0, f"0 <= m_d <= {r0}"))
    for ok, what in checks:
        if not ok:
            raise DomainError(f"build_delta precondition failed: {what}")
    if i == 0:
        verts = [(0,) * d] + [axis_point(d, j, 2 * x0) for j in range(d)]
        claimed = (2 * x0) ** d
    else:
        k = i - 1  # zero-based axis of e_i
        apex = axis_point(d, k, 2 * x0)
        ei = _unit(d, k)
        if i < d:
            height = r0 // factorial(d - i)
            claimed = g_derivative(d, i, h)
        else:
            height = h
            claimed = h
        verts = [apex, _add(apex, ei, height)]
        for j in range(d):
            if j == k:
                continue
            step = 1 if j < k else h
            verts.append(_add(apex, _add(_unit(d, j), ei, -1), step))
    verts = tuple(verts)
    for v in verts:
        if min(v) < 0 or sum(v) > r:
            raise InvariantViolation(f"Delta_{i} vertex {v} outside S({r})", (d, r, i, x0, h))
    vol = simplex_volume(verts)
    if vol != claimed:
        raise InvariantViolation(f"Delta_{i} volume {vol} != claimed {claimed}",
                                 (d, r, i, x0, h))
    return SimplexSpec(i, verts, claimed)


def _peel(d: int, r: int, dec: GreedyDecomposition) -> PeelingSequence:
    x0 = dec.xs[0]
    deltas = [build_delta(d, r, 0, x0)]
    deltas += [build_delta(d, r, i, x0, dec.xs[i]) for i in range(1, d)]
    deltas.append(build_delta(d, r, d, x0, dec.remainder))
    Y = tuple(face_vertices(d, r))
    xsets = [tuple(v for v in deltas[0].vertices if any(v))]
    points = set(Y) | set(xsets[0])
    polys = [convex_hull(points, d)]
    for delta in deltas[1:]:
        apex = delta.vertices[0]
        xi = tuple(v for v in delta.vertices if v != apex)
        xsets.append(xi)
        points |= set(xi)
        if delta.claimed:
            # the corner at a non-degenerate Delta_i is removed
            points.discard(apex)
        polys.append(convex_hull(points, d))
    return PeelingSequence(d, r, tuple(deltas), tuple(polys), Y, tuple(xsets))


def verify_additivity(seq: PeelingSequence) -> bool:
    """Each step loses exactly its simplex' volume, and the total adds up."""
    d, r = seq.d, seq.r
    prev = corner_simplex(d, r)
    prev_v = r**d
    total = 0
    for delta, poly in zip(seq.deltas, seq.polytopes):
        v = normalized_volume(poly)
        if simplex_volume(delta.vertices) != delta.claimed:
            return False
        if prev_v - v != delta.claimed:
            return False
        if not in_family(poly, d, r) or not all(prev.contains(p) for p in poly.vertices):
            return False
        total += delta.claimed
        prev, prev_v = poly, v
    return r**d - prev_v == total


def planar_missed(r: int, m: int) -> ConvexLatticePolytope:
    """A member of P^2(r) with missed volume ``m`` (``0 <= m <= r^2 - r``).

    Cuts the quadrilateral ``0, (a,0), (p,q), (0,h)`` from ``S(r)``; its
    normalized area is ``a q + p h`` and it is a valid cut when
    ``a q + p h < a h``.
    """
    if not 0 <= m <= r * r - r:
        raise OutOfRangeError(f"planar missed volume needs 0 <= m <= r^2 - r, got {m}")
    if m <= r:
        return thin_cut(2, r, m)
    for h in range(r, 0, -1):
        for a in range(r, 0, -1):
            if a * h <= m:
                break
            for q in range(h):
                rest = m - a * q
                if rest < 0:
                    break
                if rest % h == 0:
                    p = rest // h
                    poly = convex_hull([(r, 0), (0, r), (a, 0), (p, q), (0, h)], 2)
                    if normalized_volume(poly) != r * r - m:
                        raise InvariantViolation("planar cut volume mismatch", (r, m, a, p, q, h))
                    return poly
    raise OutOfRangeError(f"no planar cut found for r={r}, m={m}")


def missed_range(d: int, r: int) -> int:
    """Largest missed volume covered by the construction."""
    if d == 2:
        return r * r - r
    return (r - threshold(d)) ** d


def construct_missed(d: int, r: int, m: int) -> Construction:
    """A verified ``P`` in P^d(r) with ``v(P) = r^d - m``."""
    if d == 2:
        poly = planar_missed(r, m)
        return Construction(poly, "thin-cut" if m <= r else "planar", params=dict(d=d, r=r, m=m))
    if d < 2:
        raise DomainError("dimension must be at least 2")
    r0 = threshold(d)
    if r <= r0:
        raise OutOfRangeError(f"construction needs r > 2^d d! = {r0}, got r={r}")
    if not 0 <= m <= (r - r0) ** d:
        raise OutOfRangeError(f"m={m} outside [0, (r - 2^d d!)^d] = [0, {(r - r0) ** d}]")
    if m <= r:
        seq = thin_cut_sequence(d, r, m)
        return Construction(seq.polytopes[-1], "thin-cut", seq, params=dict(d=d, r=r, m=m))
    dec = decompose(d, m)
    seq = _peel(d, r, dec)
    poly = seq.polytopes[-1]
    v = normalized_volume(poly)
    if v != r**d - m or not in_family(poly, d, r) or not verify_additivity(seq):
        raise InvariantViolation(f"peeling failed for d={d}, r={r}, m={m}: v={v}",
                                 dict(d=d, r=r, m=m, xs=dec.xs, remainder=dec.remainder))
    return Construction(poly, "peeling", seq, dec, dict(d=d, r=r, m=m))
