"""Batch command-line entry point.

Every run prints a one-line summary followed by a JSON object holding the
result and a manifest (subcommand, parameters, seed, version). Exit codes:
0 success, 1 usage error, 2 domain or range error, 3 invariant violation,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import BudgetExceededError, DomainError, InvariantViolation

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INVARIANT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2
        raise UsageError(message)


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int | None
    version: str = __version__
    outcome: dict = field(default_factory=dict)


def _radius_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _write_csv(path: str, header: Sequence[str], rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def _jobs(args) -> int:
    return args.jobs if args.jobs is not None else (os.cpu_count() or 1)


# --- subcommands ------------------------------------------------------------

def cmd_decompose(args) -> tuple[str, dict]:
    from .decomposition import AdmissiblePolynomial, decompose, decompose_general
    if args.poly:
        g = AdmissiblePolynomial.parse(args.poly)
        dec = decompose_general(g, args.m)
    else:
        dec = decompose(args.d, args.m)
    out = {"d": dec.d, "m": dec.m, "xs": list(dec.xs), "remainder": dec.remainder,
           "trace": list(dec.trace)}
    return f"decompose m={dec.m}: xs={tuple(dec.xs)} remainder {dec.remainder}", out


def cmd_construct(args) -> tuple[str, dict]:
    from .construction import construct_missed
    from .polytope import from_json, normalized_volume, to_json
    c = construct_missed(args.d, args.r, args.m)
    poly = c.polytope
    v = normalized_volume(poly)
    out = {"d": args.d, "r": args.r, "m": args.m, "method": c.method, "v": v,
           "f0": poly.f0}
    if args.trace and c.sequence is not None:
        steps = []
        for delta, p in zip(c.sequence.deltas, c.sequence.polytopes):
            steps.append({"index": delta.index, "claimed": delta.claimed,
                          "vertices": [list(x) for x in delta.vertices],
                          "v_after": normalized_volume(p)})
        out["steps"] = steps
        if c.decomposition is not None:
            out["xs"] = list(c.decomposition.xs)
            out["remainder"] = c.decomposition.remainder
    if args.emit:
        text = to_json(poly)
        with open(args.emit, "w") as fh:
            fh.write(text + "\n")
        back = from_json(open(args.emit).read())
        if back != poly or normalized_volume(back) != v:
            raise InvariantViolation("emitted polytope failed to round-trip", args.emit)
        out["emitted"] = args.emit
    return f"construct d={args.d} r={args.r} m={args.m}: v={v} via {c.method}", out


_SHAPES = {"ball": "ball", "orthant": "orthant-ball", "orthant-ball": "orthant-ball",
           "paraboloid": "paraboloid"}
_HULL_CSV = ("shape", "d", "r", "f0", "|X|", "max_closeness_num",
             "max_closeness_den_or_float", "hull_volume", "gap_volume")


def cmd_hull_lab(args) -> tuple[str, dict]:
    from . import hull_lab
    shape = _SHAPES[args.shape]
    radii = _radius_list(args.scan) if args.scan else [args.r]
    if radii == [None]:
        raise UsageError("hull-lab needs --r or --scan")
    rows = []
    for r in radii:
        rep = hull_lab.integer_hull(shape, args.d, Fraction(r), args.budget)
        rows.append(rep.csv_row())
    out = {"rows": rows}
    if args.scan and shape != "paraboloid":
        fits = {}
        if len(radii) >= 5:
            rs = [Fraction(r) for r in radii]
            if shape == "ball":
                c = hull_lab.closeness_scan(args.d, rs, args.budget)
                f = hull_lab.vertex_count_scan(args.d, rs, args.budget)
                fits["closeness"] = [c.exponent, c.target, c.residual]
                fits["f0"] = [f.exponent, f.target, f.residual]
                out["minkowski_certified"] = c.notes["certified"]
            else:
                x = hull_lab.positive_vertex_scan(args.d, rs, args.budget)
                s = hull_lab.sandwich_scan(args.d, rs, args.budget)
                fits["|X|"] = [x.exponent, x.target, x.residual]
                fits["sandwich"] = [s.exponent, s.target, s.residual]
            g = hull_lab.gap_scan(shape, args.d, rs, args.budget)
            fits["gap"] = [g.exponent, g.target, g.residual]
        out["fits (float exponent, target, residual)"] = fits
    if shape == "paraboloid":
        out["vertex_claim"] = {str(r): hull_lab.paraboloid_vertex_check(args.d, Fraction(r),
                                                                       args.budget)[0]
                               for r in radii}
    if args.csv:
        _write_csv(args.csv, _HULL_CSV, rows)
    last = rows[-1]
    return (f"hull-lab {shape} d={args.d}: {len(rows)} radii, last r={last['r']} "
            f"f0={last['f0']} |X|={last['|X|']}"), out


def cmd_arnold(args) -> tuple[str, dict]:
    from .arnold import CENSUS_BUDGET, base_family, census
    spec = base_family(args.d, args.r, markers=args.markers)
    rep = census(spec, budget=args.budget or CENSUS_BUDGET, sample=args.sample,
                 seed=args.seed, jobs=_jobs(args))
    out = {"d": spec.d, "r": str(spec.r), "rho": spec.rho, "X": len(spec.X),
           "v_target": spec.v_target, "m_max": spec.m_max, "marked": spec.marked,
           "generated": rep.generated, "distinct": rep.distinct, "max_class": rep.max_class,
           "volumes_ok": rep.volumes_ok, "edges_ok": all(r.edges_ok for r in rep.rows),
           "edge_threshold": str(spec.edge_threshold), "sampled": rep.sampled,
           "implied_exponent (float)": spec.implied_exponent()}
    if args.csv:
        _write_csv(args.csv, ("Z_bitmask", "m_Z", "f0", "distinct_flag"),
                   [{"Z_bitmask": r.mask, "m_Z": r.m_Z, "f0": r.f0,
                     "distinct_flag": int(r.distinct)} for r in rep.rows])
    if not (rep.volumes_ok and out["edges_ok"]):
        raise InvariantViolation("family member failed verification", out)
    return (f"arnold d={spec.d} r={spec.r}: {rep.generated} subsets, {rep.distinct} distinct, "
            f"v_target={spec.v_target}"), out


def cmd_gaps(args) -> tuple[str, dict]:
    from . import gaps
    if args.strategy == "exhaustive":
        rep = gaps.value_set_exhaustive(args.d, args.r)
        out = {"d": args.d, "r": args.r, "strategy": rep.strategy, "states": rep.states,
               "achieved": list(rep.achieved), "gaps": [list(g) for g in rep.gaps]}
        rows = [{"v": v, "witness": json.dumps([list(p) for p in rep.witnesses[v]])}
                for v in rep.achieved]
        summary = f"gaps exhaustive d={args.d} r={args.r}: {len(rep.achieved)} values, gaps {rep.gaps}"
    elif args.d == 3 and args.r >= 6 and args.sample is None:
        cert = gaps.verify_gap_theorems(args.r, jobs=_jobs(args))
        out = cert.as_dict()
        rows = [{"v": f"{c.lo}-{c.hi}", "witness": c.status} for c in cert.intervals]
        summary = (f"gaps layered d=3 r={args.r}: " +
                   ", ".join(f"[{c.lo},{c.hi}] {c.status}" for c in cert.intervals))
        if not cert.ok:
            raise InvariantViolation(summary, out)
    elif args.d >= 4 and args.sample is None:
        c = gaps.verify_gap_d(args.d, args.r, jobs=_jobs(args))
        out = c.as_dict()
        rows = [{"v": f"{c.lo}-{c.hi}", "witness": c.status}]
        summary = f"gaps layered d={args.d} r={args.r}: [{c.lo},{c.hi}] {c.status}"
        if c.status == "violated":
            raise InvariantViolation(summary, out)
    else:
        rep = gaps.value_set_layered(args.d, args.r, sample=args.sample, seed=args.seed,
                                     jobs=_jobs(args))
        out = {"d": args.d, "r": args.r, "strategy": rep.strategy,
               "certifying": rep.certifying, "achieved": list(rep.achieved)}
        rows = [{"v": v, "witness": json.dumps([list(p) for p in rep.witnesses[v]])}
                for v in rep.achieved]
        summary = f"gaps {rep.strategy} d={args.d} r={args.r}: {len(rep.achieved)} values"
    if args.csv:
        _write_csv(args.csv, ("v", "witness"), rows)
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(out, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return summary, out


def cmd_verify_all(args) -> tuple[str, dict]:
    from .acceptance import run_all
    numbers = [int(k) for k in _radius_list(args.only)] if args.only else None
    results = run_all(numbers, jobs=_jobs(args), echo=lambda s: print(s, flush=True),
                      seed=args.seed)
    out = {"criteria": {r.number: {"passed": r.passed, "detail": r.detail} for r in results}}
    passed = sum(r.passed for r in results)
    summary = f"verify-all: {passed}/{len(results)} criteria passed"
    if passed != len(results):
        raise InvariantViolation(summary, out)
    return summary, out


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticeforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, *names):
        if "jobs" in names:
            sp.add_argument("--jobs", type=int, default=None, help="worker processes")
        if "seed" in names:
            sp.add_argument("--seed", type=int, default=0)
        if "csv" in names:
            sp.add_argument("--csv", help="write rows to this CSV file")
        if "emit" in names:
            sp.add_argument("--emit", help="write a JSON file")
        if "budget" in names:
            sp.add_argument("--budget", type=int, default=None)

    s = sub.add_parser("decompose", help="greedy derivative decomposition of m")
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--poly", help='coefficients "c_k,...,c_0", highest degree first')
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("construct", help="polytope with missed volume m")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--trace", action="store_true")
    common(s, "emit")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("hull-lab", help="integer hulls of balls and paraboloids")
    s.add_argument("--shape", choices=sorted(_SHAPES), default="ball")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", default=None, help="radius; int or p/q")
    s.add_argument("--scan", help="comma-separated radii")
    common(s, "csv", "budget", "jobs")
    s.set_defaults(func=cmd_hull_lab)

    s = sub.add_parser("arnold", help="equal-volume non-equivalent family")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", required=True)
    s.add_argument("--markers", action="store_true")
    s.add_argument("--sample", type=int, default=None)
    common(s, "csv", "budget", "jobs", "seed")
    s.set_defaults(func=cmd_arnold)

    s = sub.add_parser("gaps", help="achievable volumes and gap certificates")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--strategy", choices=("exhaustive", "layered"), default="layered")
    s.add_argument("--sample", type=int, default=None)
    common(s, "csv", "emit", "jobs", "seed")
    s.set_defaults(func=cmd_gaps)

    s = sub.add_parser("verify-all", help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    common(s, "jobs", "seed")
    s.set_defaults(func=cmd_verify_all)
    return p


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        if args.command == "decompose" and args.d is None and not args.poly:
            raise UsageError("decompose needs --d or --poly")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(args.command, _params(args), getattr(args, "seed", None))
    code = EXIT_OK
    try:
        summary, out = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        summary, out, code = f"budget exceeded: {exc}", {"count": exc.count}, EXIT_BUDGET
    except InvariantViolation as exc:
        summary, out, code = f"invariant violation: {exc}", {"instance": repr(exc.instance)}, \
            EXIT_INVARIANT
    except DomainError as exc:
        summary, out, code = f"domain error: {exc}", {}, EXIT_DOMAIN
    manifest.outcome = {"exit_code": code, "summary": summary}
    print(summary)
    print(json.dumps({"result": out, "manifest": asdict(manifest)}, sort_keys=True,
                     default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
