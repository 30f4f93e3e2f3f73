"""Command-line front end.

Subcommands parse diagram or incidence files, run the enumeration and
verification suites, and emit deterministic JSON reports (keys sorted,
no insignificant whitespace).  Exit codes: 0 success, 2 parse or
validation failure, 3 hypothesis failure, 4 resource limit, 5 property
failure.
"""

import argparse
import hashlib
import json
import sys
import time
from itertools import combinations

from . import f2, properties, thin, triangles
from .coxeter import max_elements_cap, parse_coxeter_matrix
from .errors import (
    ChamberlabError,
    HypothesisError,
    ParseError,
    ResourceLimit,
    TheoremViolation,
    ValidationError,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_RESOURCE = 4
EXIT_PROPERTY = 5


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _emit(report, args):
    text = json.dumps(report, sort_keys=True, separators=(",", ":"))
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report(command, inputs, parameters, results, violations, t0):
    return {
        "command": command,
        "inputs": inputs,
        "parameters": parameters,
        "results": results,
        "violations": violations,
        "wall_clock_ms": int((time.monotonic() - t0) * 1000),
    }


def _load_matrix(path):
    with open(path) as fh:
        return parse_coxeter_matrix(fh.read())


def cmd_check(args):
    t0 = time.monotonic()
    M = _load_matrix(args.diagram)
    lattice = []
    for r in range(1, min(M.rank, 3) + 1):
        for J in combinations(range(M.rank), r):
            if M.is_spherical(set(J)):
                lattice.append(sorted(M.generators[s] for s in J))
    two_spherical = all(
        M.m[s][t] != 0 for s in range(M.rank) for t in range(s + 1, M.rank)
    )
    results = {
        "rank": M.rank,
        "generators": list(M.generators),
        "two_spherical": two_spherical,
        "two_complete": M.is_2_complete(),
        "a2tilde_free": M.is_a2tilde_free(),
        "spherical_subsets": sorted(lattice),
    }
    _emit(
        _report("check", {args.diagram: _digest(args.diagram)}, {}, results, [], t0),
        args,
    )
    return EXIT_OK


def cmd_triangles(args):
    t0 = time.monotonic()
    M = _load_matrix(args.diagram)
    cap = max_elements_cap(args.max_elements)
    tris = triangles.enumerate_reflection_triangles(M, args.radius)
    found = []
    violations = []
    for rs, shared in tris:
        entry = {
            "reflections": [M.elem_to_str(t) for t in rs],
            "residues": [thin.residue_to_str(M, R) for R in shared],
        }
        if args.verify:
            try:
                T = triangles.sigma_triangle_from_reflection_triangle(
                    M, list(rs), args.radius
                )
                chamber = triangles.triangle_intersection(T)
                entry["chamber"] = M.elem_to_str(chamber)
                for R in sorted(T, key=lambda R: (sorted(R.typeset), R.key)):
                    c = triangles.pairwise_projection_chamber(T, R)
                    if c != chamber:
                        raise TheoremViolation(
                            "pairwise projection chamber differs from the "
                            "triple intersection",
                            witness=entry,
                        )
            except TheoremViolation as e:
                violations.append({"message": str(e), "witness": e.witness})
        found.append(entry)
    results = {
        "triangles_found": len(found),
        "triangles": found,
        "ball_radius": args.radius,
        "max_elements": cap,
        "instances_checked": len(found),
    }
    _emit(
        _report(
            "triangles",
            {args.diagram: _digest(args.diagram)},
            {"radius": args.radius, "verify": bool(args.verify)},
            results,
            violations,
            t0,
        ),
        args,
    )
    return EXIT_OK if not violations else EXIT_PROPERTY


def cmd_building(args):
    t0 = time.monotonic()
    g = f2.load_incidence(args.incidence)
    B = f2.flag_building(g, args.gonality)
    if args.action == "validate":
        rep = f2.validate_building(B)
        results = {k: v for k, v in rep.items() if k != "violations"}
        violations = rep["violations"]
    else:
        panels = {}
        for c in B.chambers:
            for s in (0, 1):
                chambers = tuple(B.residue_chambers({s}, c))
                panels[(s, chambers[0])] = len(chambers)
        sizes = {}
        for size in panels.values():
            sizes[str(size)] = sizes.get(str(size), 0) + 1
        results = {
            "num_points": g.num_points,
            "num_lines": g.num_lines,
            "num_chambers": len(B.chambers),
            "num_panels": len(panels),
            "panel_size_census": sizes,
            "gonality": B.m,
        }
        violations = []
    _emit(
        _report(
            "building",
            {args.incidence: _digest(args.incidence)},
            {"action": args.action, "gonality": args.gonality},
            results,
            violations,
            t0,
        ),
        args,
    )
    return EXIT_OK if not violations else EXIT_PARSE


def cmd_rgd(args):
    t0 = time.monotonic()
    if args.which == "a2":
        B = f2.flag_building(f2.fano_plane(), 3)
        datum = f2.root_group_datum_A2(B)
    else:
        B = f2.flag_building(f2.doily(), 4)
        datum = f2.root_group_datum_B2(B)
    report = f2.check_rgd(datum)
    sp = f2.stabilized_panels_set(datum)
    violations = []
    if not report.passed:
        violations.append("RGD axiom failure")
    if sp.lemma_violation:
        violations.append("stabilized panel set differs from {c+, c-}")
    if not f2.distinct_stabilized_panels_check(datum):
        violations.append("stabilized panels not distinct/opposite")
    results = {
        "building": args.which,
        "axioms": report.verdicts,
        "group_order": report.group_order,
        "torus_order": len(report.torus),
        "stabilized_chambers": [list(c) for c in sp.chambers],
        "expected_chambers": [list(c) for c in sp.expected],
        "c_plus": list(datum.c_plus),
        "c_minus": list(datum.c_minus),
    }
    _emit(
        _report("rgd", {}, {"which": args.which}, results, violations, t0), args
    )
    return EXIT_OK if not violations else EXIT_PROPERTY


def cmd_property_suite(args):
    t0 = time.monotonic()
    M = _load_matrix(args.diagram)
    results = properties.run_suite(M, args.radius, seed=args.seed)
    violations = [
        {"property": name, "witnesses": res["violations"]}
        for name, res in results.items()
        if res["violations"]
    ]
    body = {
        "instances_checked": sum(r["instances"] for r in results.values()),
        "ball_radius": args.radius,
        "per_property": {
            name: {"instances": r["instances"], "violations": len(r["violations"])}
            for name, r in results.items()
        },
    }
    _emit(
        _report(
            "property-suite",
            {args.diagram: _digest(args.diagram)},
            {"radius": args.radius, "seed": args.seed},
            body,
            violations,
            t0,
        ),
        args,
    )
    return EXIT_OK if not violations else EXIT_PROPERTY


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chamberlab",
        description="Coxeter systems, thin and thick buildings, triangles, RGD checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="diagram sanity report")
    p.add_argument("diagram")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("triangles", help="enumerate and verify reflection triangles")
    p.add_argument("diagram")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--max-elements", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_triangles)

    p = sub.add_parser("building", help="validate or show a flag building")
    p.add_argument("action", choices=["validate", "show"])
    p.add_argument("incidence")
    p.add_argument("--gonality", type=int, required=True)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_building)

    p = sub.add_parser("rgd", help="root group datum checks over F2")
    p.add_argument("which", choices=["a2", "b2"])
    p.add_argument("--json")
    p.set_defaults(fn=cmd_rgd)

    p = sub.add_parser("property-suite", help="run the seeded lemma suite")
    p.add_argument("diagram")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_property_suite)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisError as e:
        print(f"hypothesis not satisfied: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ChamberlabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
