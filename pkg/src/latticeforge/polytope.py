"""Convex lattice polytopes with exact integer geometry.

Hulls are computed by an exact beneath-beyond (quickhull-style) insertion
for d >= 3 and by Andrew's monotone chain in the plane. Lower dimensional
inputs are projected to a coordinate subspace on which the affine hull
projects bijectively, solved there, and lifted back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Sequence

from .errors import DomainError, UnsupportedDimensionError
from .exact import (EchelonBasis, Vector, det, dot, normal_vector, rank,
                    solve_rational, sub)

Facet = tuple[Vector, int]


@dataclass(frozen=True, eq=False)
class ConvexLatticePolytope:
    """Convex hull of finitely many lattice points.

    ``vertices`` are the true extreme points in lexicographic order;
    ``facets`` are outward primitive normals ``a`` with offsets ``b`` such
    that the polytope is ``{x : a.x <= b}``. For ``dim < d`` the facet list
    is empty and ``affine_basis`` holds a base point and direction vectors.
    """

    d: int
    vertices: tuple[Vector, ...]
    facets: tuple[Facet, ...]
    dim: int
    affine_basis: tuple[Vector, ...] = ()
    _boundary: tuple[tuple[Vector, ...], ...] = field(default=(), repr=False)
    _projection: tuple | None = field(default=None, repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexLatticePolytope):
            return NotImplemented
        return self.d == other.d and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.d, self.vertices))

    def __repr__(self) -> str:
        return (f"ConvexLatticePolytope(d={self.d}, dim={self.dim}, "
                f"f0={len(self.vertices)})")

    @property
    def f0(self) -> int:
        return len(self.vertices)

    def contains(self, point: Sequence[int]) -> bool:
        """Exact membership test."""
        p = tuple(point)
        if self.dim == self.d:
            return all(dot(a, p) <= b for a, b in self.facets)
        if self.dim == 0:
            return p == self.vertices[0]
        coords, sub_poly = self._projection
        base, dirs = self.affine_basis[0], self.affine_basis[1:]
        # lift the projected point back and compare with p
        y = [p[c] - base[c] for c in coords]
        lam = solve_rational([[v[c] for v in dirs] for c in coords], y)
        lifted = [base[j] + sum(l * v[j] for l, v in zip(lam, dirs))
                  for j in range(self.d)]
        if any(Fraction(x) != Fraction(q) for x, q in zip(lifted, p)):
            return False
        return sub_poly.contains(tuple(p[c] for c in coords))

    def facet_indices(self, point: Sequence[int]) -> frozenset[int]:
        """Indices of the facets whose hyperplane contains ``point``."""
        p = tuple(point)
        return frozenset(i for i, (a, b) in enumerate(self.facets)
                         if dot(a, p) == b)


def _check_points(points: Iterable[Sequence[int]], d: int | None) -> tuple[list[Vector], int]:
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise DomainError("convex hull of an empty point set")
    if d is None:
        d = len(pts[0])
    for p in pts:
        if len(p) != d:
            raise DomainError(f"point {p} does not have dimension {d}")
    return pts, d


def convex_hull(points: Iterable[Sequence[int]], d: int | None = None) -> ConvexLatticePolytope:
    """Exact convex hull of a finite set of lattice points."""
    pts, d = _check_points(points, d)
    base = pts[0]
    basis = EchelonBasis()
    dirs: list[Vector] = []
    for p in pts[1:]:
        v = sub(p, base)
        if basis.add(v):
            dirs.append(v)
            if len(dirs) == d:
                break
    k = len(dirs)
    if k == d:
        if d == 1:
            verts = (pts[0], pts[-1])
            facets = (((-1,), -pts[0][0]), ((1,), pts[-1][0]))
            return ConvexLatticePolytope(1, verts, facets, 1, (),
                                         ((pts[0],), (pts[-1],)))
        if d == 2:
            return _hull_2d(pts)
        return _hull_nd(pts, d)
    if k == 0:
        return ConvexLatticePolytope(d, (base,), (), 0, (base,))
    # pick k coordinates on which the direction space projects bijectively
    coords = None
    for cand in combinations(range(d), k):
        if rank([[v[c] for c in cand] for v in dirs]) == k:
            coords = cand
            break
    proj = {tuple(p[c] for c in coords): p for p in pts}
    sub_poly = convex_hull(proj.keys(), k)
    verts = tuple(sorted(proj[v] for v in sub_poly.vertices))
    return ConvexLatticePolytope(d, verts, (), k, (base, *dirs), (),
                                 (coords, sub_poly))


def _cross(o: Vector, a: Vector, b: Vector) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts: list[Vector]) -> ConvexLatticePolytope:
    # pts sorted and unique, not collinear
    lower: list[Vector] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vector] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]  # counter-clockwise
    n = len(ring)
    facets = []
    edges = []
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        normal = normal_vector([sub(b, a)])
        # outward for a ccw ring is (dy, -dx)
        normal = (-normal[0], -normal[1])
        facets.append((normal, dot(normal, a)))
        edges.append((a, b))
    return ConvexLatticePolytope(2, tuple(sorted(ring)), tuple(facets), 2, (),
                                 tuple(edges))


class _Facet:
    __slots__ = ("verts", "normal", "offset", "outside", "alive")

    def __init__(self, verts, normal, offset):
        self.verts = verts
        self.normal = normal
        self.offset = offset
        self.outside: list[int] = []
        self.alive = True


def _hull_nd(pts: list[Vector], d: int) -> ConvexLatticePolytope:
    # initial simplex from coordinate extremes first, then everything else
    order: list[int] = []
    for j in range(d):
        order.append(min(range(len(pts)), key=lambda i: pts[i][j]))
        order.append(max(range(len(pts)), key=lambda i: pts[i][j]))
    order.extend(range(len(pts)))
    simplex = [order[0]]
    basis = EchelonBasis()
    for i in order[1:]:
        if i in simplex:
            continue
        if basis.add(sub(pts[i], pts[simplex[0]])):
            simplex.append(i)
            if len(simplex) == d + 1:
                break
    centre = tuple(sum(pts[i][j] for i in simplex) for j in range(d))
    scale = d + 1

    def make(verts: tuple[int, ...]) -> _Facet:
        p0 = pts[verts[0]]
        normal = normal_vector([sub(pts[v], p0) for v in verts[1:]])
        offset = dot(normal, p0)
        if dot(normal, centre) > scale * offset:
            normal = tuple(-a for a in normal)
            offset = -offset
        return _Facet(verts, normal, offset)

    ridges: dict[tuple[int, ...], list[_Facet]] = {}

    def link(f: _Facet) -> None:
        for skip in range(d):
            key = f.verts[:skip] + f.verts[skip + 1:]
            ridges.setdefault(key, []).append(f)

    def unlink(f: _Facet) -> None:
        for skip in range(d):
            key = f.verts[:skip] + f.verts[skip + 1:]
            lst = ridges[key]
            lst.remove(f)
            if not lst:
                del ridges[key]

    facets = []
    for skip in range(d + 1):
        f = make(tuple(sorted(simplex[:skip] + simplex[skip + 1:])))
        facets.append(f)
        link(f)
    in_simplex = set(simplex)
    for i, p in enumerate(pts):
        if i in in_simplex:
            continue
        for f in facets:
            if dot(f.normal, p) > f.offset:
                f.outside.append(i)
                break
    stack = [f for f in facets if f.outside]
    all_facets = list(facets)
    while stack:
        f = stack.pop()
        if not f.alive or not f.outside:
            continue
        nrm, off = f.normal, f.offset
        apex = max(f.outside, key=lambda i: dot(nrm, pts[i]) - off)
        p = pts[apex]
        visible = [f]
        seen = {id(f)}
        horizon: list[tuple[int, ...]] = []
        queue = [f]
        while queue:
            g = queue.pop()
            for skip in range(d):
                key = g.verts[:skip] + g.verts[skip + 1:]
                for h in ridges[key]:
                    if h is g or id(h) in seen:
                        continue
                    if dot(h.normal, p) > h.offset:
                        seen.add(id(h))
                        visible.append(h)
                        queue.append(h)
                    else:
                        horizon.append(key)
        # a horizon ridge may be recorded once per visible side; dedupe
        horizon = [key for key in dict.fromkeys(horizon)
                   if any(id(h) not in seen for h in ridges[key])]
        orphans: list[int] = []
        for g in visible:
            g.alive = False
            orphans.extend(g.outside)
            g.outside = []
            unlink(g)
        new = []
        for key in horizon:
            verts = tuple(sorted(key + (apex,)))
            nf = make(verts)
            link(nf)
            new.append(nf)
        all_facets.extend(new)
        for i in orphans:
            if i == apex:
                continue
            q = pts[i]
            for nf in new:
                if dot(nf.normal, q) > nf.offset:
                    nf.outside.append(i)
                    break
        stack.extend(nf for nf in new if nf.outside)
    live = [f for f in all_facets if f.alive]
    return _finish_full(pts, d, live)


def _finish_full(pts: list[Vector], d: int, live: list[_Facet]) -> ConvexLatticePolytope:
    hyper: dict[Facet, int] = {}
    incident: dict[int, set[int]] = {}
    for f in live:
        h = hyper.setdefault((f.normal, f.offset), len(hyper))
        for v in f.verts:
            incident.setdefault(v, set()).add(h)
    facets = tuple(hyper)
    verts = []
    for v, hs in incident.items():
        if len(hs) >= d and rank([facets[h][0] for h in hs]) == d:
            verts.append(pts[v])
    boundary = tuple(tuple(pts[v] for v in f.verts) for f in live)
    return ConvexLatticePolytope(d, tuple(sorted(verts)), facets, d, (), boundary)


def normalized_volume(poly: ConvexLatticePolytope, apex: Sequence[int] | None = None) -> int:
    """Exact ``d! * vol``: cone the boundary triangulation from ``apex``.

    ``apex`` defaults to the first vertex and must lie in the polytope.
    """
    if poly.dim < poly.d:
        return 0
    a = tuple(apex) if apex is not None else poly.vertices[0]
    total = 0
    for simplex in poly._boundary:
        total += abs(det([sub(v, a) for v in simplex]))
    return total


def euclidean_volume(poly: ConvexLatticePolytope) -> Fraction:
    return Fraction(normalized_volume(poly), factorial(poly.d))


def simplex_volume(vertices: Sequence[Sequence[int]]) -> int:
    """Normalized volume of a simplex given by ``d + 1`` vertices."""
    v0 = vertices[0]
    return abs(det([sub(v, v0) for v in vertices[1:]]))


def edges(poly: ConvexLatticePolytope) -> list[tuple[Vector, Vector]]:
    """All 1-faces of a full-dimensional polytope (d <= 4)."""
    d = poly.d
    if d > 4:
        raise UnsupportedDimensionError(f"edge enumeration supports d <= 4, got {d}")
    if poly.dim < d:
        raise DomainError("edge enumeration requires a full-dimensional polytope")
    active = [poly.facet_indices(v) for v in poly.vertices]
    out = []
    for i, j in combinations(range(len(poly.vertices)), 2):
        common = active[i] & active[j]
        if len(common) >= d - 1 and rank([poly.facets[h][0] for h in common]) == d - 1:
            out.append((poly.vertices[i], poly.vertices[j]))
    return out


def canonical_form(poly: ConvexLatticePolytope) -> tuple[Vector, ...]:
    """Lexicographically least sorted vertex list over all axis permutations."""
    best = None
    for perm in permutations(range(poly.d)):
        cand = tuple(sorted(tuple(v[k] for k in perm) for v in poly.vertices))
        if best is None or cand < best:
            best = cand
    return best


def apply_unimodular(poly: ConvexLatticePolytope, u: Sequence[Sequence[int]],
                     t: Sequence[int] | None = None) -> ConvexLatticePolytope:
    """Image of ``poly`` under ``x -> U x + t`` with ``|det U| = 1``."""
    d = poly.d
    if len(u) != d or any(len(row) != d for row in u):
        raise DomainError("U must be a d x d integer matrix")
    if abs(det(u)) != 1:
        raise DomainError(f"|det U| = {abs(det(u))}, not unimodular")
    t = tuple(t) if t is not None else (0,) * d
    image = [tuple(dot(row, v) + s for row, s in zip(u, t)) for v in poly.vertices]
    return convex_hull(image, d)


def simplex_vertices(d: int, r: int) -> list[Vector]:
    """Vertices of the corner simplex ``S(r)``."""
    out = [(0,) * d]
    out.extend(axis_point(d, i, r) for i in range(d))
    return out


def face_vertices(d: int, r: int) -> list[Vector]:
    """Vertices of ``A(r) = conv{r e_1, ..., r e_d}``."""
    return [axis_point(d, i, r) for i in range(d)]


def axis_point(d: int, i: int, length: int) -> Vector:
    return tuple(length if j == i else 0 for j in range(d))


def corner_simplex(d: int, r: int) -> ConvexLatticePolytope:
    return convex_hull(simplex_vertices(d, r), d)


def in_family(poly: ConvexLatticePolytope, d: int, r: int) -> bool:
    """True iff ``A(r) <= poly <= S(r)``."""
    if poly.d != d:
        return False
    if not all(poly.contains(v) for v in face_vertices(d, r)):
        return False
    return all(min(v) >= 0 and sum(v) <= r for v in poly.vertices)


def to_json(poly: ConvexLatticePolytope) -> str:
    return json.dumps({"d": poly.d, "vertices": [list(v) for v in poly.vertices]})


def from_json(text: str) -> ConvexLatticePolytope:
    """Read the polytope text object and revalidate it.

    The vertex list must be exact integers, sorted, and every entry must be
    a genuine vertex of the hull.
    """
    obj = json.loads(text)
    d = obj.get("d")
    verts = obj.get("vertices")
    if not isinstance(d, int) or isinstance(d, bool) or not isinstance(verts, list):
        raise DomainError("polytope object needs integer 'd' and list 'vertices'")
    for v in verts:
        if len(v) != d or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
            raise DomainError(f"vertex {v!r} is not a length-{d} integer array")
    tv = [tuple(v) for v in verts]
    if tv != sorted(tv):
        raise DomainError("vertices are not lexicographically sorted")
    poly = convex_hull(tv, d)
    if list(poly.vertices) != tv:
        raise DomainError("listed points are not exactly the hull vertices")
    return poly
