"""Integer convex hulls of balls, orthant balls and the paraboloid.

Measures vertex closeness to the sphere, vertex counts and missed cap
volumes, and fits their scaling exponents against ``r`` on log-log axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Sequence

import mpmath
import numpy as np

from .errors import DomainError
from .exact import Vector, dot
from .polytope import ConvexLatticePolytope, euclidean_volume, normalized_volume
from .regions import as_radius, region_hull, squared_bound

HULL_SHAPES = ("ball", "orthant-ball", "paraboloid")
_DPS = 40


def exponent_D(d: int) -> Fraction:
    """``d (d-1) / (d+1)``."""
    return Fraction(d * (d - 1), d + 1)


@dataclass(frozen=True)
class IntegerHullReport:
    shape: str
    d: int
    r: Fraction
    hull: ConvexLatticePolytope
    X: tuple[Vector, ...]
    hull_volume: int
    min_norm_sq: int | None

    @property
    def f0(self) -> int:
        return self.hull.f0

    @property
    def max_closeness(self) -> float | None:
        """``max_x (r - |x|)`` over vertices, i.e. ``r - sqrt(min |x|^2)``."""
        if self.min_norm_sq is None:
            return None
        with mpmath.workdps(_DPS):
            return float(mpmath.mpf(self.r.numerator) / self.r.denominator
                         - mpmath.sqrt(self.min_norm_sq))

    def closeness_at_most(self, t: Fraction) -> bool:
        """Exact test of ``max closeness <= t`` via ``(r - t)^2 <= min |x|^2``."""
        s = self.r - Fraction(t)
        return s <= 0 or s * s <= self.min_norm_sq

    def csv_row(self) -> dict:
        cap = missed_cap_volume(self.shape, self.d, self.r, report=self)
        return {
            "shape": self.shape, "d": self.d, "r": str(self.r), "f0": self.f0,
            "|X|": len(self.X),
            "max_closeness_num": "" if self.min_norm_sq is None else self.min_norm_sq,
            "max_closeness_den_or_float": "" if self.min_norm_sq is None
            else repr(self.max_closeness),
            "hull_volume": self.hull_volume,
            "gap_volume": mpmath.nstr(cap.gap, 20),
        }


def integer_hull(shape: str, d: int, r, budget: int | None = None) -> IntegerHullReport:
    """``I(K)`` for ``K`` a ball, orthant ball or paraboloid of size ``r``."""
    if shape not in HULL_SHAPES:
        raise DomainError(f"unsupported shape {shape!r}; expected one of {HULL_SHAPES}")
    if d < 2:
        raise DomainError("dimension must be at least 2")
    r = as_radius(r)
    if r < 1:
        raise DomainError("radius must be at least 1")
    hull = region_hull(shape, d, r, budget=budget)
    X = tuple(v for v in hull.vertices if min(v) > 0)
    min_sq = None
    if shape != "paraboloid":
        # the orthant's origin corner is not near the sphere
        min_sq = min(dot(v, v) for v in hull.vertices if any(v))
    return IntegerHullReport(shape, d, r, hull, X, normalized_volume(hull), min_sq)


def positive_vertices(report: IntegerHullReport) -> tuple[Vector, ...]:
    """Vertices all of whose coordinates are strictly positive."""
    return report.X


def minkowski_violations(report: IntegerHullReport) -> list[tuple[Vector, Vector]]:
    """Lattice points ``z != x`` in ``rB ∩ (2x - rB)`` for hull vertices ``x``.

    For a vertex of ``I(rB)`` this lens must hold no lattice point other
    than its centre. Any ``z`` in the lens satisfies
    ``|z - x|^2 <= r^2 - |x|^2``, which bounds the search.
    """
    if report.shape != "ball":
        raise DomainError("the lens certificate is defined for the full ball")
    nsq = squared_bound(report.r)
    verts = report.hull.vertices
    slacks = [nsq - dot(x, x) for x in verts]
    # every candidate offset u = z - x, sorted by squared norm
    us = np.array([u for u in _small_vectors(report.d, max(slacks)) if any(u)],
                  dtype=np.int64).reshape(-1, report.d)
    norms = (us * us).sum(axis=1)
    order = np.argsort(norms, kind="stable")
    us, norms = us[order], norms[order]
    bad = []
    for x, slack in zip(verts, slacks):
        k = int(np.searchsorted(norms, slack, side="right"))
        # |x+u|^2 <= nsq and |x-u|^2 <= nsq
        hit = np.abs(2 * (us[:k] @ np.array(x, dtype=np.int64))) <= slack - norms[:k]
        bad.extend((x, tuple(int(a) + b for a, b in zip(u, x))) for u in us[:k][hit])
    return bad


def _small_vectors(d: int, bound: int):
    def rec(prefix: tuple[int, ...], left: int):
        if len(prefix) == d:
            yield prefix
            return
        h = isqrt(left)
        for a in range(-h, h + 1):
            yield from rec(prefix + (a,), left - a * a)
    if bound >= 0:
        yield from rec((), bound)


@dataclass(frozen=True)
class CapVolume:
    hull_volume: Fraction
    region_volume: mpmath.mpf
    gap: mpmath.mpf


def region_volume(shape: str, d: int, r) -> mpmath.mpf:
    """Euclidean volume of the region, to ``_DPS`` digits."""
    r = as_radius(r)
    with mpmath.workdps(_DPS):
        rr = mpmath.mpf(r.numerator) / r.denominator
        if shape == "ball":
            return _omega(d) * rr**d
        if shape == "orthant-ball":
            return _omega(d) * rr**d / 2**d
        if shape == "paraboloid":
            # orthant part of a (d-1)-ball of radius sqrt(t), integrated to r^2
            k = d - 1
            return _omega(k) / 2**k * (rr**2) ** (mpmath.mpf(d + 1) / 2) * 2 / (d + 1)
    raise DomainError(f"unsupported shape {shape!r}")


def _omega(d: int) -> mpmath.mpf:
    return mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2 + 1)


def missed_cap_volume(shape: str, d: int, r, report: IntegerHullReport | None = None,
                      budget: int | None = None) -> CapVolume:
    """Exact hull volume, high-precision region volume and their difference."""
    if report is None:
        report = integer_hull(shape, d, r, budget)
    hv = euclidean_volume(report.hull)
    with mpmath.workdps(_DPS):
        rv = region_volume(shape, d, report.r)
        gap = rv - mpmath.mpf(hv.numerator) / hv.denominator
    return CapVolume(hv, rv, gap)


def sandwich_gap(d: int, r, budget: int | None = None) -> mpmath.mpf:
    """``2^-d omega_d r^d - vol I(Q^r \\ X)`` with ``X`` the positive vertices."""
    rep = integer_hull("orthant-ball", d, r, budget)
    inner = region_hull("orthant-ball", d, rep.r, exclude=frozenset(rep.X), budget=budget)
    hv = euclidean_volume(inner)
    with mpmath.workdps(_DPS):
        return region_volume("orthant-ball", d, rep.r) - mpmath.mpf(hv.numerator) / hv.denominator


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through ``(log r, log value)``."""

    quantity: str
    rows: tuple[tuple[Fraction, float], ...]
    exponent: float
    target: float
    residual: float
    prefactor: float
    bound_constant: float
    notes: dict = field(default_factory=dict)

    def within(self, tol: float) -> bool:
        return abs(self.exponent - self.target) <= tol


def loglog_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Slope, intercept and RMS residual of ``log y`` against ``log x``."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def _fit(quantity: str, rows, target: float, notes=None) -> ScalingFit:
    usable = [(r, y) for r, y in rows if y > 0]
    if len(usable) < 5:
        raise DomainError(f"need at least 5 positive samples to fit {quantity}")
    xs = [float(r) for r, _ in usable]
    ys = [float(y) for _, y in usable]
    slope, intercept, resid = loglog_fit(xs, ys)
    const = max(y / x**target for x, y in zip(xs, ys))
    return ScalingFit(quantity, tuple(rows), slope, float(target), resid,
                      float(np.exp(intercept)), const, notes or {})


def _radii(r_list) -> list[Fraction]:
    rs = [as_radius(r) for r in r_list]
    if len(rs) < 5:
        raise DomainError("a scan needs at least 5 radii")
    return rs


def closeness_scan(d: int, r_list, budget: int | None = None) -> ScalingFit:
    """Fit ``max_x (r - |x|)`` over vertices of ``Q_r``; target ``-(d-1)/(d+1)``.

    Also checks the lens certificate at every vertex of every radius; the
    violations (expected empty) are recorded under ``notes["minkowski"]``.
    """
    rows = []
    violations = {}
    for r in _radii(r_list):
        rep = integer_hull("ball", d, r, budget)
        rows.append((r, rep.max_closeness))
        violations[r] = minkowski_violations(rep)
    return _fit("max_closeness", rows, -(d - 1) / (d + 1),
                {"minkowski": violations,
                 "certified": all(not v for v in violations.values())})


def vertex_count_scan(d: int, r_list, budget: int | None = None) -> ScalingFit:
    """Fit ``f_0(Q_r)`` against ``r``; target ``D = d(d-1)/(d+1)``."""
    rows = [(r, integer_hull("ball", d, r, budget).f0) for r in _radii(r_list)]
    return _fit("f0", rows, float(exponent_D(d)))


def positive_vertex_scan(d: int, r_list, budget: int | None = None) -> ScalingFit:
    """Fit ``|X|`` for ``Q^r``; target ``D``."""
    rows = [(r, len(integer_hull("orthant-ball", d, r, budget).X)) for r in _radii(r_list)]
    return _fit("|X|", rows, float(exponent_D(d)))


def gap_scan(shape: str, d: int, r_list, budget: int | None = None) -> ScalingFit:
    """Fit the missed cap volume against ``r``; target ``D``."""
    rows = [(r, float(missed_cap_volume(shape, d, r, budget=budget).gap))
            for r in _radii(r_list)]
    return _fit(f"gap[{shape}]", rows, float(exponent_D(d)))


def sandwich_scan(d: int, r_list, budget: int | None = None) -> ScalingFit:
    rows = [(r, float(sandwich_gap(d, r, budget))) for r in _radii(r_list)]
    return _fit("sandwich", rows, float(exponent_D(d)))


def paraboloid_vertex_check(d: int, r, budget: int | None = None) -> tuple[bool, list[Vector]]:
    """Is ``(z, |z|^2)`` a vertex of ``I(D_r)`` for every lattice ``z >= 0``
    with ``|z| <= r``? Returns the verdict and the counterexamples."""
    if d not in (2, 3):
        raise DomainError("the paraboloid check is implemented for d in {2, 3}")
    r = as_radius(r)
    top = squared_bound(r)
    hull = region_hull("paraboloid", d, r, budget=budget)
    verts = set(hull.vertices)
    bad = []
    h = isqrt(top)
    for z in product(range(h + 1), repeat=d - 1):
        s = dot(z, z)
        if s <= top and z + (s,) not in verts:
            bad.append(z + (s,))
    return not bad, bad
