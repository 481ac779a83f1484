"""Command line entry point: ``fadhm <command> ...``.

Every command writes one JSON report (sorted keys, no timing unless
``--timing``), or an indented text rendering with ``--pretty``.
Exit codes: 0 ok, 2 invalid input, 3 resource limit, 4 failed internal check.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import adhm, ci, gs, invariants as inv
from .groebner import ResourceLimitError, groebner_basis
from .orders import MonomialOrder
from .poly import PolyParseError, parse_poly
from .problem import ProblemSpec, Report, SpecError, parse_spec
from .quiver import QuiverError, generic_rep, group_dims
from .rng import substream

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = 0, 2, 3, 4


def _ints(text: str | None) -> tuple[int, ...] | None:
    if not text:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"expected comma-separated rationals, got {text!r}") from None


def _spec_inputs(spec: ProblemSpec, path: str) -> dict:
    return {"spec": spec.to_json(), "spec_path": Path(path).name}


def _system(spec: ProblemSpec):
    return adhm.moment_map(spec.double, spec.dims, spec.framing, spec.filtration)


def _jordan_blocks(spec: ProblemSpec):
    """(n, blocks, w) if the spec is a framed Jordan quiver, else None."""
    q = spec.quiver
    if len(q.vertices) != 1 or len(q.arrows) != 1 or q.arrows[0].head != q.arrows[0].tail:
        return None
    v = q.vertices[0]
    n = spec.dims[v]
    alpha = spec.filtration.blocks(v, n)
    return n, (None if all(a == 1 for a in alpha) else tuple(alpha)), spec.framing.get(v, 0)


# commands -------------------------------------------------------------------------


def cmd_double(args) -> Report:
    spec = parse_spec(args.spec)
    dq = spec.double
    rep = generic_rep(dq, spec.dims, spec.framing, spec.filtration)
    per, total = group_dims(rep.dims, spec.filtration)
    arrows = []
    for a in dq.arrows:
        arrows.append({
            "name": a.name, "tail": a.tail, "head": a.head, "eps": a.eps, "op": a.op,
            "mask": [[p + 1, q + 1] for p, q in sorted(rep.masks[a.name].allowed)],
        })
    results = {"arrows": arrows, "variables": list(rep.ring.names), "nvars": rep.nvars,
               "group_dims": per, "group_dim": total}
    return Report("double", _spec_inputs(spec, args.spec), results)


def cmd_moment(args) -> Report:
    spec = parse_spec(args.spec)
    return Report("moment", _spec_inputs(spec, args.spec), _system(spec).to_json())


def cmd_ci(args) -> Report:
    spec = parse_spec(args.spec)
    system = _system(spec)
    prov = {"mode": args.mode, "seed": args.seed}
    if args.mode == "exact":
        orders = tuple(args.order.split(",")) if args.order else ci.ORDER_NAMES
        strat = ci.OrderingStrategy(orders, args.budget_pairs, args.budget_terms)
        prov.update({"orders": list(orders), "budget_pairs": args.budget_pairs,
                     "budget_terms": args.budget_terms})
        verdict = ci.ci_exact(system, strat)
    elif args.mode == "shortcut":
        name = args.order or "degrevlex"
        prov["orders"] = [name]
        verdict = ci.ci_leading_shortcut(system, MonomialOrder.from_name(name, system.ring))
    else:
        prov["samples"] = args.samples
        verdict = ci.ci_probabilistic(system, args.samples, substream(args.seed, "ci", "prob"))
    results = {
        "verdict": verdict.to_json(certificate=args.certificate, timing=args.timing),
        "flatness": ci.flatness_report(system, verdict),
    }
    report = Report("ci", _spec_inputs(spec, args.spec), results, prov)
    if args.mode == "exact" and verdict.status == ci.INCONCLUSIVE and verdict.evidence.get("attempts"):
        report.ok = False
        report.results["error"] = "every order exhausted its budget"
        raise _ResourceReport(report)
    return report


class _ResourceReport(RuntimeError):
    def __init__(self, report: Report):
        super().__init__("resource budget exhausted")
        self.report = report


def _space(spec: ProblemSpec, which: str) -> inv.MatrixSpace:
    if which == "arrows":
        return inv.arrow_space(spec.quiver, spec.dims, spec.filtration)
    return inv.space_from_rep(generic_rep(spec.double, spec.dims, spec.framing, spec.filtration))


def cmd_invariants(args) -> Report:
    spec = parse_spec(args.spec)
    space = _space(spec, args.space)
    ders = inv.simple_root_derivations(space)
    sub = inv.invariant_space(space.ring, ders, args.degree)
    results = {"degree": args.degree, "action": f"unipotent, {args.space}", "dim": sub.dim,
               "basis": [f.to_text() for f in sub.basis], "variables": list(space.ring.names)}
    if args.space == "arrows":
        diag = inv.diagonal_variables(space)
        results["diagonal_variables"] = diag
        results["diagonal_polynomial_count"] = inv.polynomial_count(len(diag), args.degree)
    prov = {"degree": args.degree, "space": args.space}
    return Report("invariants", _spec_inputs(spec, args.spec), results, prov)


def cmd_semiinv(args) -> Report:
    spec = parse_spec(args.spec)
    space = _space(spec, args.space)
    coords = space.coordinates()
    weight = args.weight or tuple([0] * len(coords))
    if len(weight) != len(coords):
        raise ValueError(f"weight needs {len(coords)} entries, one per vertex coordinate")
    ders = inv.simple_root_derivations(space)
    sub = inv.semi_invariant_space(space.ring, ders, inv.torus_weights(space), weight, args.degree)
    results = {"degree": args.degree, "action": f"borel, {args.space}", "weight": list(weight),
               "coordinates": [f"{v}:{k + 1}" for v, k in coords], "dim": sub.dim,
               "basis": [f.to_text() for f in sub.basis]}
    return Report("semiinv", _spec_inputs(spec, args.spec), results,
                  {"degree": args.degree, "space": args.space})


def cmd_relations(args) -> Report:
    spec = parse_spec(args.spec)
    system = _system(spec)
    ring = system.ring
    if args.generators:
        gens = [parse_poly(t, ring) for t in args.generators.split(";")]
        labels = [t.strip() for t in args.generators.split(";")]
    else:
        jb = _jordan_blocks(spec)
        if jb is None or jb[1] is not None or jb[2] == 0:
            raise ValueError("default generators need a framed Jordan spec with a complete flag; pass --generators")
        pairs = gs.cleared_invariants(jb[0], jb[2])
        labels = [p[0] for p in pairs]
        gens = [ring.coerce(parse_poly(p[1].to_text(), ring)) for p in pairs]
    order = MonomialOrder.degrevlex(ring)
    basis = groebner_basis(system.polys, order, ring=ring,
                           max_pairs=args.budget_pairs, max_terms=args.budget_terms)
    rels = inv.relations_up_to_degree(gens, basis, args.degree)
    names = [f"g{k + 1}" for k in range(len(gens))]
    results = {"degree": args.degree,
               "generators": {n: {"label": lab, "polynomial": g.to_text()}
                              for n, lab, g in zip(names, labels, gens)},
               "relations": [r.to_text(names) for r in rels], "count": len(rels)}
    prov = {"degree": args.degree, "order": "degrevlex", "budget_pairs": args.budget_pairs,
            "budget_terms": args.budget_terms}
    return Report("relations", _spec_inputs(spec, args.spec), results, prov)


def cmd_gs_sample(args) -> Report:
    rng = substream(args.seed, "gs", "sample")
    pts = []
    for _ in range(args.count):
        p = gs.sample_fiber(args.n, rng, args.alpha, args.w)
        entry = {"point": p.to_json(), "certificate": p.certificate.to_json(),
                 "on_fiber": p.on_fiber()}
        if args.alpha is None:
            entry["invariants"] = gs.fghk(p).to_json()
        pts.append(entry)
    inputs = {"n": args.n, "alpha": list(args.alpha) if args.alpha else None, "w": args.w}
    return Report("gs sample", inputs, {"points": pts}, {"seed": args.seed, "count": args.count})


def cmd_gs_map(args) -> Report:
    data = json.loads(Path(args.point).read_text())
    if "results" in data:  # a report written by ``gs sample``
        data = data["results"]["points"][0]
    if "point" in data:
        data = data["point"]
    p = gs.GSPoint.from_json(data)
    if not p.on_fiber():
        raise ValueError("point is not on the zero fiber of the moment map")
    P = gs.gs_map_P(p)
    results = {"P": [str(x) for x in P], "in_diagonal_locus": gs.in_diagonal_locus(P)}
    report = Report("gs map", {"point": p.to_json()}, results)
    if results["in_diagonal_locus"]:
        report.ok = False
    return report


def cmd_gs_orbit_check(args) -> Report:
    rng = substream(args.seed, "gs", "orbit-check", args.n)
    failures = 0
    for k in range(args.points):
        x = gs.sample_fiber(args.n, rng)
        v = gs.orbit_consistency(x, args.samples, rng)
        failures += not v.passed
    results = {"n": args.n, "points": args.points, "samples_per_point": args.samples,
               "failures": failures, "passed": failures == 0}
    report = Report("gs orbit-check", {"n": args.n}, results,
                    {"seed": args.seed, "points": args.points, "samples": args.samples})
    report.ok = failures == 0
    return report


def cmd_gs_idempotents(args) -> Report:
    if args.symbolic:
        r = gs.jordan_rep(args.n).C["r"]
        proj = gs.spectral_projectors(r)
        checks = gs.idempotent_checks(proj)
        ids = gs.symbolic_trace_identities(args.n)
        results = {
            "mode": "symbolic",
            "L": [[[str(v) for v in row] for row in L] for L in proj.L],
            "checks": checks,
            "trace_identities": ids,
        }
        ok = checks["all"] and all(ids.values())
    else:
        rng = substream(args.seed, "gs", "idempotents", args.n)
        failures = 0
        for _ in range(args.samples):
            checks = gs.idempotent_checks(gs.spectral_projectors(gs.random_rss(args.n, rng)))
            failures += not checks["all"]
        results = {"mode": "sampled", "samples": args.samples, "failures": failures}
        ok = failures == 0
    report = Report("gs idempotents", {"n": args.n}, results,
                    {"seed": args.seed, "symbolic": args.symbolic})
    report.ok = ok
    return report


def cmd_gs_witness(args) -> Report:
    if args.target:
        targets = [_fractions(args.target)]
    else:
        rng = substream(args.seed, "gs", "witness", args.n)
        from .rng import rand_distinct, rand_fraction

        targets = [rand_distinct(rng, args.n) + [rand_fraction(rng) for _ in range(args.n)]
                   for _ in range(args.samples)]
    out, ok = [], True
    for t in targets:
        p = gs.surjectivity_witness(t)
        image = gs.gs_map_P(p)
        good = p.on_fiber() and image == t
        ok &= good
        out.append({"target": [str(x) for x in t], "witness": p.to_json(), "round_trip": good})
    report = Report("gs witness", {"n": args.n if not args.target else len(targets[0]) // 2},
                    {"witnesses": out, "all_round_trip": ok}, {"seed": args.seed})
    report.ok = ok
    return report


# parser ---------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented text output")
    p.set_defaults(pretty=False)
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing")


def _budgets(p: argparse.ArgumentParser):
    p.add_argument("--budget-pairs", type=int, default=200_000)
    p.add_argument("--budget-terms", type=int, default=200_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fadhm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("double", help="double quiver, masks, and variables")
    p.add_argument("spec")
    _common(p)
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("moment", help="moment map components")
    p.add_argument("spec")
    _common(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("ci", help="complete-intersection verdict")
    p.add_argument("spec")
    p.add_argument("--mode", choices=("exact", "shortcut", "prob"), default="exact")
    p.add_argument("--order", help="order name, or comma list for exact mode")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--certificate", action="store_true", help="include the Groebner basis")
    _budgets(p)
    _common(p)
    p.set_defaults(func=cmd_ci)

    for name, func in (("invariants", cmd_invariants), ("semiinv", cmd_semiinv)):
        p = sub.add_parser(name, help={"invariants": "degree-bounded unipotent invariants", "semiinv": "degree-bounded semi-invariants of a torus weight"}[name])
        p.add_argument("spec")
        p.add_argument("--degree", type=int, default=2)
        p.add_argument("--space", choices=("arrows", "full"), default="arrows",
                       help="forward arrows only, or the full framed double")
        if name == "semiinv":
            p.add_argument("--weight", type=_ints, help="comma list, one entry per vertex coordinate")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("relations", help="relations among generators modulo the moment ideal")
    p.add_argument("spec")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--generators", help="semicolon-separated polynomials")
    _budgets(p)
    _common(p)
    p.set_defaults(func=cmd_relations)

    g = sub.add_parser("gs", help="framed Jordan quiver tools").add_subparsers(dest="gs_command", required=True)
    p = g.add_parser("sample", help="sample points of the zero fiber")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_ints)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--count", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_gs_sample)

    p = g.add_parser("map", help="evaluate P at a point given as JSON")
    p.add_argument("point")
    _common(p)
    p.set_defaults(func=cmd_gs_map)

    p = g.add_parser("orbit-check", help="P constant on sampled Borel orbits")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--points", type=int, default=5)
    _common(p)
    p.set_defaults(func=cmd_gs_orbit_check)

    p = g.add_parser("idempotents", help="spectral idempotent identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    _common(p)
    p.set_defaults(func=cmd_gs_idempotents)

    p = g.add_parser("witness", help="preimages of P for given or random targets")
    p.add_argument("--target", help="comma list r_11..r_nn,s'_11..s'_nn")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=5)
    _common(p)
    p.set_defaults(func=cmd_gs_witness)
    return parser


def _emit(report: Report, args):
    text = report.pretty() if args.pretty else report.dumps()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except SpecError as exc:
        for path, msg in exc.violations:
            print(f"invalid input at {path}: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except _ResourceReport as exc:
        _emit(exc.report, args)
        print(f"{args.command}: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ResourceLimitError as exc:
        print(f"{args.command}: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, QuiverError, PolyParseError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"{args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, ArithmeticError) as exc:
        print(f"{args.command}: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.timing:
        report.timing = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args)
    if not report.ok:
        print(f"{report.task}: verification failed", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
