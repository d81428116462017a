"""The acceptance suite, shared by ``latticeforge verify-all`` and the tests.

Each criterion returns a ``CriterionResult``; nothing here relaxes a
tolerance to make a check pass.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import factorial
from typing import Callable

from . import arnold, construction, decomposition, gaps, hull_lab
from .errors import LatticeForgeError
from .polytope import in_family, normalized_volume

SCAN_RADII_2D = (64, 128, 256, 512, 1024, 2048, 4096)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} -- {self.detail} ({self.seconds:.1f}s)"


def criterion_1(jobs: int = 1) -> CriterionResult:
    worst = {}
    bad = []
    for d in (2, 3):
        bound = decomposition.remainder_bound(d)
        deriv = lambda i, x, d=d: decomposition.g_derivative(d, i, x)
        top = 0
        for m in range(100_001):
            dec = decomposition.decompose(d, m)
            if dec.check(deriv, bound):
                bad.append((d, m))
            top = max(top, dec.remainder)
        worst[d] = top
    return CriterionResult(1, "greedy decomposition, d in {2,3}, m <= 10^5", not bad,
                           f"violations={len(bad)}, max m_d={worst} (bounds 8, 48)",
                           data={"violations": bad[:10], "max_remainder": worst})


def criterion_2(jobs: int = 1) -> CriterionResult:
    d, r = 3, 60
    bad = []
    for m in range(1729):
        try:
            c = construction.construct_missed(d, r, m)
            poly = c.polytope
            if normalized_volume(poly) != r**d - m or not in_family(poly, d, r) \
                    or normalized_volume(poly) < r ** (d - 1):
                bad.append(m)
        except LatticeForgeError:
            bad.append(m)
    return CriterionResult(2, "missed volumes, d=3, r=60, every m in [0, 1728]", not bad,
                           f"{1729 - len(bad)}/1729 verified", data={"failed": bad[:20]})


def criterion_3(jobs: int = 1, seed: int = 0) -> CriterionResult:
    d, r = 4, 400
    rng = random.Random(seed)
    ms = [rng.randint(0, 16**4) for _ in range(500)]
    bad = []
    for m in ms:
        try:
            poly = construction.construct_missed(d, r, m).polytope
            if normalized_volume(poly) != r**d - m:
                bad.append(m)
        except LatticeForgeError:
            bad.append(m)
    return CriterionResult(3, "missed volumes, d=4, r=400, 500 random m", not bad,
                           f"{500 - len(bad)}/500 verified (seed {seed})",
                           data={"failed": bad[:20], "seed": seed})


def criterion_4(jobs: int = 1) -> CriterionResult:
    wrong = []
    for r in range(2, 7):
        rep = gaps.value_set_exhaustive(2, r)
        if set(rep.achieved) != {0} | set(range(r, r * r + 1)):
            wrong.append(r)
    return CriterionResult(4, "planar value sets {0} ∪ [r, r^2], r = 2..6", not wrong,
                           f"mismatched radii: {wrong or 'none'}")


def criterion_5(jobs: int = 1) -> CriterionResult:
    certs = {r: gaps.verify_gap_theorems(r, jobs=jobs) for r in (6, 7)}
    parts = []
    for r, c in certs.items():
        parts.append(f"r={r}: " + ", ".join(f"[{i.lo},{i.hi}] {i.status}" for i in c.intervals))
    return CriterionResult(5, "gap certificates, d=3, r in {6,7}",
                           all(c.ok for c in certs.values()), "; ".join(parts),
                           data={r: c.as_dict() for r, c in certs.items()})


def criterion_6(jobs: int = 1) -> CriterionResult:
    close = hull_lab.closeness_scan(2, SCAN_RADII_2D)
    count = hull_lab.vertex_count_scan(2, SCAN_RADII_2D)
    ok = close.within(0.15) and count.within(0.15) and close.notes["certified"]
    return CriterionResult(
        6, "planar ball scans, r = 64..4096", ok,
        f"closeness exponent {close.exponent:.3f} (target -1/3 ± 0.15), "
        f"f0 exponent {count.exponent:.3f} (target 2/3 ± 0.15), "
        f"lens certificate {'holds' if close.notes['certified'] else 'FAILS'}",
        data={"closeness": close.exponent, "f0": count.exponent})


def criterion_7(jobs: int = 1, start: int = 100) -> CriterionResult:
    r = arnold.find_feasible_radius(2, start)
    plain = arnold.base_family(2, r)
    marked = arnold.base_family(2, r, markers=True)
    c0 = arnold.census(plain, jobs=jobs)
    c1 = arnold.census(marked, jobs=jobs)
    n = 2 ** len(plain.X)
    ok = (c0.volumes_ok and c1.volumes_ok and c0.classes_bounded()
          and c0.distinct * factorial(2) >= c0.generated
          and c1.distinct == c1.generated == 2 ** len(marked.X)
          and all(row.edges_ok for row in c0.rows + c1.rows))
    return CriterionResult(
        7, f"equal-volume family, d=2, r={r}", ok,
        f"|X|={len(plain.X)}, 2^|X|={n}, v_target={plain.v_target}, rho={plain.rho}; "
        f"unmarked classes {c0.distinct} (max size {c0.max_class}); "
        f"marked {c1.distinct}/{c1.generated} distinct",
        data={"r": r, "X": len(plain.X), "unmarked": c0.distinct, "marked": c1.distinct})


def criterion_8(jobs: int = 1) -> CriterionResult:
    bad = []
    for d, rmax in ((2, 50), (3, 8)):
        for r in range(1, rmax + 1):
            ok, ce = hull_lab.paraboloid_vertex_check(d, r)
            if not ok:
                bad.append((d, r, ce[:3]))
    return CriterionResult(8, "paraboloid lift points are hull vertices", not bad,
                           f"d=2 r<=50, d=3 r<=8: counterexamples {bad or 'none'}")


def criterion_9(jobs: int = 1, radii=(100, 120, 140, 160, 180)) -> CriterionResult:
    rows = []
    for r in radii:
        try:
            spec = arnold.base_family(2, r)
        except arnold.InfeasibleFamilyError:
            continue
        rows.append((r, len(spec.X), str(spec.V_target), round(spec.implied_exponent(), 3)))
    text = "; ".join(f"r={r}: |X|={x}, V={v}, implied {e}" for r, x, v, e in rows)
    return CriterionResult(9, "asymptotic claims reported, not asserted (target 1/3)",
                           bool(rows), text, data={"rows": rows})


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run(number: int, jobs: int = 1, seed: int = 0) -> CriterionResult:
    t = time.perf_counter()
    kwargs = {"jobs": jobs}
    if number == 3:
        kwargs["seed"] = seed
    try:
        res = CRITERIA[number](**kwargs)
    except LatticeForgeError as exc:
        res = CriterionResult(number, "aborted", False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t
    return res


def run_all(numbers=None, jobs: int = 1, echo: Callable[[str], None] | None = print,
            seed: int = 0) -> list[CriterionResult]:
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run(k, jobs, seed)
        if echo:
            echo(res.line())
        out.append(res)
    return out
