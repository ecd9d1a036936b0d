"""Command-line entry point.

One subcommand per capability: verify, solve, enumerate, rset, seq, cnf,
decode, manybody.  Output goes to stdout as exactly one report (JSON with
sorted keys, or human-readable text); diagnostics go to stderr.  Exit codes:
0 success, 1 failed verification or unproven prove-mode result, 2 usage
errors and scale refusals.  JSON output excludes timing so identical
invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import manybody, sat, sequence, transforms
from .constraints import (
    Constraint,
    certificate_to_dict,
    load_certificate,
    verify_coloring,
)
from .errors import (
    InconsistentAssignment,
    InsufficientTerms,
    MalformedAssignment,
    ScaleRefusal,
    SchurlabError,
)
from .search import LOWER_BOUND, PROVE, Budget, SearchParams, enumerate_colorings, solve

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _constraint_from_args(args) -> Constraint:
    kind = getattr(args, "kind", "classic")
    mod = getattr(args, "mod", None)
    if mod is not None:
        return Constraint.weak_modular(mod) if kind == "weak" else Constraint.modular(mod)
    return Constraint.weak() if kind == "weak" else Constraint.classic()


def _emit(payload: dict, args, text_renderer) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        text_renderer(payload)


def _add_common(parser: argparse.ArgumentParser, constraint: bool = True) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="text")
    if constraint:
        parser.add_argument("--kind", choices=("classic", "weak"), default="classic")
        parser.add_argument("--mod", type=int, default=None, metavar="M",
                            help="modulus; selects the modular variants")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schurlab",
        description="sum-free partition search, verification, and small exact spectra",
    )
    default_threads = int(os.environ.get("SCHURLAB_THREADS", "1"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("--cert", required=True, help="certificate JSON path")
    _add_common(p, constraint=False)

    p = sub.add_parser("solve", help="exact or lower-bound search")
    _add_common(p)
    p.add_argument("-k", type=int, required=True, metavar="K", dest="k")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--prove", action="store_true", default=True)
    mode.add_argument("--lower-bound", action="store_true")
    p.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    p.add_argument("--hint", default=None, metavar="CERT", help="starting certificate")
    p.add_argument("--threads", type=int, default=default_threads)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, metavar="PATH", help="write the certificate here")

    p = sub.add_parser("enumerate", help="stream all valid colorings")
    _add_common(p)
    p.add_argument("-k", type=int, required=True, dest="k")
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--canonical", action="store_true")

    p = sub.add_parser("rset", help="rearrangement set and group check")
    _add_common(p)
    p.add_argument("-k", type=int, required=True, dest="k")

    p = sub.add_parser("seq", help="the doubling-free sequence")
    p.add_argument("--terms", type=int, required=True, metavar="N")
    p.add_argument("--check-fractal", action="store_true")
    p.add_argument("--check-genfun", type=int, default=None, metavar="E")
    p.add_argument("--occupancy", type=int, default=None, metavar="SITES")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("cnf", help="export a DIMACS encoding")
    _add_common(p)
    p.add_argument("-k", type=int, required=True, dest="k")
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("-o", "--out", default=None, metavar="PATH")

    p = sub.add_parser("decode", help="decode a SAT model into a certificate")
    _add_common(p)
    p.add_argument("-k", type=int, required=True, dest="k")
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--assignment", required=True, metavar="PATH")
    p.add_argument("--out", default=None, metavar="PATH")

    p = sub.add_parser("manybody", help="basis, spectrum, and ground state")
    _add_common(p)
    p.add_argument("--levels", type=int, required=True, metavar="K")
    p.add_argument("--values", type=int, required=True, metavar="N")
    p.add_argument("--energies", required=True, metavar="E1,..,EK")
    p.add_argument("--hop", type=float, default=0.0, metavar="J")
    p.add_argument("--int", type=float, default=0.0, dest="interaction", metavar="L")
    p.add_argument("--allow-absent", action="store_true")
    p.add_argument("--algebra", action="store_true",
                   help="report the operator algebra instead of the spectrum")

    return parser


def _cmd_verify(args) -> int:
    coloring, constraint = load_certificate(args.cert)
    report = verify_coloring(coloring, constraint)
    payload = {
        "valid": report.valid,
        "kind": constraint.kind,
        "modulus": constraint.modulus,
        "K": coloring.K,
        "n": coloring.n,
        "violations": [list(v) for v in report.violations],
    }

    def render(p):
        verdict = "valid" if p["valid"] else "INVALID"
        print(f"certificate: {verdict} ({constraint.describe()}, K={p['K']}, n={p['n']})")
        for block, x, y, z in p["violations"]:
            print(f"  violation in block {block}: {x} + {y} = {z}")

    _emit(payload, args, render)
    return EXIT_OK if report.valid else EXIT_FAIL


def _cmd_solve(args) -> int:
    constraint = _constraint_from_args(args)
    mode = LOWER_BOUND if args.lower_bound else PROVE
    budget = Budget(seconds=args.budget) if args.budget else None
    hint = None
    if args.hint:
        hint, hint_constraint = load_certificate(args.hint)
        if hint_constraint != constraint:
            print("hint certificate was built for a different constraint",
                  file=sys.stderr)
            return EXIT_USAGE
    params = SearchParams(
        K=args.k, constraint=constraint, mode=mode, budget=budget,
        start_hint=hint, threads=args.threads, seed=args.seed,
    )
    result = solve(params)
    payload = {
        "value": result.value,
        "proven_maximal": result.proven_maximal,
        "mode": mode,
        "kind": constraint.kind,
        "modulus": constraint.modulus,
        "K": args.k,
        "certificate": certificate_to_dict(result.certificate, constraint),
    }

    def render(p):
        status = "proven" if p["proven_maximal"] else "not proven maximal"
        print(f"value = {p['value']} ({status}) for K={p['K']} {constraint.describe()}")
        print(f"certificate: {result.certificate.describe()}")
        print(f"nodes={result.stats.nodes} seconds={result.stats.seconds:.3f}",
              file=sys.stderr)

    _emit(payload, args, render)
    if args.out:
        from .constraints import save_certificate

        save_certificate(args.out, result.certificate, constraint)
    if mode == PROVE and not result.proven_maximal:
        return EXIT_FAIL
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    constraint = _constraint_from_args(args)
    colorings = list(
        enumerate_colorings(args.k, args.n, constraint, canonical=args.canonical)
    )
    payload = {
        "count": len(colorings),
        "canonical": bool(args.canonical),
        "colorings": [certificate_to_dict(c, constraint)["blocks"] for c in colorings],
    }

    def render(p):
        print(f"{p['count']} colorings")
        for c in colorings:
            print(f"  {c.describe()}")

    if args.format == "json":
        print(json.dumps(payload["colorings"], sort_keys=True))
    else:
        render(payload)
    return EXIT_OK


def _cmd_rset(args) -> int:
    constraint = _constraint_from_args(args)
    rset = transforms.build_rset(args.k, constraint)
    report = transforms.check_group(rset)
    payload = transforms.rset_to_dict(rset, report)

    def render(p):
        print(f"cardinality {p['cardinality']} at n={p['value']} "
              f"({constraint.describe()}, K={args.k})")
        print(f"reference: {rset.reference.describe()}")
        for i, t in enumerate(rset.elements):
            moves = ", ".join(f"{v}:{a}->{b}" for v, a, b in t.moves) or "identity"
            print(f"  [{i}] {moves}")
        g = p["group"]
        print(f"group: {g['is_group']}  structure: {g['identified_structure']}"
              f"  closure failures: {g['closure_failure_count']}")
        if rset.cardinality <= 64:
            print("composition table (row then column; x = not in set):")
            for row in report.cayley:
                print("  " + " ".join("x" if e is None else str(e) for e in row))

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_seq(args) -> int:
    state = sequence.generate(args.terms)
    payload: dict = {"terms": list(state.terms)}
    if args.check_fractal:
        fr = sequence.fractal_check(state)
        payload["fractal"] = {
            "passed": fr.passed,
            "prefix_length": fr.prefix_length,
        }
    if args.check_genfun is not None:
        gf = sequence.genfun_check(state, args.check_genfun)
        payload["genfun"] = {
            "passed": gf.passed,
            "orders_checked": gf.orders_checked,
            "mismatches": [list(m) for m in gf.mismatches],
        }
    if args.occupancy is not None:
        payload["occupancy"] = sequence.occupancy_string(state, args.occupancy)

    def render(p):
        if "fractal" in p or "genfun" in p or "occupancy" in p:
            if "fractal" in p:
                print(f"fractal: {'pass' if p['fractal']['passed'] else 'FAIL'} "
                      f"(prefix {p['fractal']['prefix_length']})")
            if "genfun" in p:
                g = p["genfun"]
                print(f"genfun: {'pass' if g['passed'] else 'FAIL'} "
                      f"({g['orders_checked']} orders, {len(g['mismatches'])} mismatches)")
            if "occupancy" in p:
                print(p["occupancy"])
        else:
            print("\n".join(map(str, p["terms"])))

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_cnf(args) -> int:
    constraint = _constraint_from_args(args)
    doc = sat.export_cnf(args.k, args.n, constraint)
    text = doc.to_dimacs()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {doc.num_variables} variables, {len(doc.clauses)} clauses "
              f"to {args.out}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps({"variables": doc.num_variables,
                              "clauses": len(doc.clauses), "path": args.out},
                             sort_keys=True))
        return EXIT_OK
    if args.format == "json":
        print(json.dumps({"variables": doc.num_variables,
                          "clauses": len(doc.clauses), "dimacs": text},
                         sort_keys=True))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_decode(args) -> int:
    constraint = _constraint_from_args(args)
    doc = sat.export_cnf(args.k, args.n, constraint)
    with open(args.assignment) as fh:
        text = fh.read()
    coloring = sat.import_sat_assignment(doc, text)
    payload = certificate_to_dict(coloring, constraint)

    def render(_):
        print(coloring.describe())

    _emit(payload, args, render)
    if args.out:
        from .constraints import save_certificate

        save_certificate(args.out, coloring, constraint)
    return EXIT_OK


def _cmd_manybody(args) -> int:
    constraint = _constraint_from_args(args)
    energies = tuple(float(x) for x in args.energies.split(","))
    basis = manybody.build_basis(
        args.levels, args.values, constraint, allow_absent=args.allow_absent
    )
    if args.algebra:
        rep = manybody.algebra_report(basis)
        payload = {
            "dimension": rep.dimension,
            "passed": rep.passed,
            "blocked_deviations": [
                {"kind": d.kind, "value": d.value, "level": d.level,
                 "state": d.state_index, "witness": list(d.witness)}
                for d in rep.blocked_deviations
            ],
            "parked_exclusions": rep.parked_exclusions,
        }

        def render(p):
            print(f"algebra over {p['dimension']} states: "
                  f"{'pass' if p['passed'] else 'FAIL'}; "
                  f"{len(p['blocked_deviations'])} blocked deviations")

        _emit(payload, args, render)
        return EXIT_OK if rep.passed else EXIT_FAIL
    H = manybody.hamiltonian(basis, energies, hop=args.hop,
                             interaction=args.interaction)
    gs = manybody.ground_state(H)
    payload = manybody.ground_state_to_dict(gs, basis)
    payload["dimension"] = len(basis)

    def render(p):
        print(f"basis dimension {p['dimension']}")
        print(f"ground energy {p['energy']:.12g}, degeneracy {p['degeneracy']}")

    _emit(payload, args, render)
    return EXIT_OK


_DISPATCH = {
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "enumerate": _cmd_enumerate,
    "rset": _cmd_rset,
    "seq": _cmd_seq,
    "cnf": _cmd_cnf,
    "decode": _cmd_decode,
    "manybody": _cmd_manybody,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except ScaleRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedAssignment, InconsistentAssignment, InsufficientTerms) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SchurlabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
