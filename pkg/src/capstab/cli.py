"""Command-line interface: ``capstab <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import ScaleError
from .families import FAMILIES, generate_family
from .gamma import min_cycle_optimum
from .graph import CapGraph, GraphError
from .instance import (
    ParseError, dump_certificate, emit_certificate, parse_instance, serialize_instance,
    verify_certificate,
)
from .oracle import (
    brute_basic_optima, brute_is_stable, brute_max_c_matching, brute_min_capacity_stabilizer,
    brute_min_edge_stabilizer, enumerate_polytope_vertices, flow_fractional_value,
)
from .stabilize import (
    StabilizerError, capacity_stabilizer, edge_stabilizer_approx, is_stable,
    minimalize_stabilizer,
)

ORACLES = ("matching", "fractional", "stable", "gamma", "capacity-stabilizer",
           "edge-stabilizer", "weight-preserving-edge-stabilizer", "polytope")


class CliError(Exception):
    pass


def _load(path: str) -> CapGraph:
    try:
        if path == "-":
            return parse_instance(sys.stdin.read())
        with open(path, encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from exc
    except (ParseError, GraphError) as exc:
        raise CliError(f"{path}: {exc}") from exc


def _edges(G: CapGraph, ids) -> list[list[str]]:
    return [[G.labels[G.edges[e][0]], G.labels[G.edges[e][1]]] for e in sorted(ids)]


def _emit(args, record: dict, text: str) -> None:
    if args.format == "structured":
        print(json.dumps(record, indent=2, default=str))
    else:
        print(text)


# -- commands -----------------------------------------------------------------

def cmd_check(args) -> int:
    worst = 0
    for path in args.files:
        G = _load(path)
        chk = is_stable(G)
        rec = {"file": path, "verdict": "stable" if chk.stable else "unstable",
               "matching_value": str(chk.value), "fractional_value": str(chk.fractional_value),
               "matching": _edges(G, chk.matching)}
        text = f"{path}: {rec['verdict']} (matching {chk.value}, fractional {chk.fractional_value})"
        if chk.walk is not None:
            rec["augmenting_walk"] = chk.walk.describe(G)
            text += f"\n  feasible augmenting walk: {rec['augmenting_walk']}"
        if args.certificate:
            with open(args.certificate, "w", encoding="utf-8") as fh:
                fh.write(dump_certificate(emit_certificate(G, chk, None)))
        _emit(args, rec, text)
        worst = max(worst, 0 if chk.stable else 1)
    return worst


def cmd_gamma(args) -> int:
    G = _load(args.file)
    opt = min_cycle_optimum(G, "exact" if args.exact else "heuristic")
    rec = {"file": args.file, "cycles": opt.cycle_count, "status": opt.flag,
           "fractional_value": str(opt.value),
           "odd_cycles": [[G.labels[v] for v in c.vertices] for c in opt.x.cycles]}
    note = "" if opt.flag == "exact" else f" ({opt.flag})"
    text = f"{args.file}: {opt.cycle_count} odd cycle(s){note}, fractional value {opt.value}"
    for c in rec["odd_cycles"]:
        text += "\n  cycle " + " ".join(c)
    _emit(args, rec, text)
    return 0


def cmd_stabilize(args) -> int:
    G = _load(args.file)
    chk = is_stable(G)
    build = capacity_stabilizer if args.mode == "capacity" else edge_stabilizer_approx
    rep = build(G, args.gamma_mode)
    solution = rep.solution
    if args.minimalize and solution:
        solution = minimalize_stabilizer(G, solution, args.mode)
    if args.mode == "capacity":
        elements = [G.labels[v] for v in solution]
    else:
        elements = _edges(G, solution)
    rec = {"file": args.file, "mode": args.mode, "elements": elements, "size": len(solution),
           "lower_bound": rep.lower_bound, "weight_before": str(rep.weight_before),
           "weight_after": str(rep.weight_after), "status": rep.optimality}
    shown = ", ".join(e if isinstance(e, str) else "-".join(e) for e in elements) or "(none)"
    text = (f"{args.file}: {args.mode} stabilizer of size {len(solution)}: {shown}\n"
            f"  lower bound {rep.lower_bound} ({rep.optimality}); "
            f"matching weight {rep.weight_before} -> {rep.weight_after}")
    if args.certificate:
        doc = emit_certificate(G, chk, rep if rep.solution else None)
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(dump_certificate(doc))
    _emit(args, rec, text)
    return 0


def cmd_oracle(args) -> int:
    G = _load(args.file)
    which = args.which
    if which == "matching":
        M, value = brute_max_c_matching(G)
        rec = {"value": str(value), "matching": _edges(G, M)}
        text = f"maximum c-matching weight {value}"
    elif which == "fractional":
        value = flow_fractional_value(G)
        rec = {"value": str(value)}
        text = f"fractional optimum {value}"
    elif which == "stable":
        ok = brute_is_stable(G)
        rec = {"stable": ok}
        text = "stable" if ok else "unstable"
    elif which == "gamma":
        res = brute_basic_optima(G)
        rec = {"gamma": res.gamma, "fractional_value": str(res.value), "optima": len(res.optima)}
        text = f"gamma {res.gamma} over {len(res.optima)} basic optima"
    elif which == "capacity-stabilizer":
        k, S = brute_min_capacity_stabilizer(G)
        rec = {"size": k, "elements": [G.labels[v] for v in S]}
        text = f"minimum capacity stabilizer size {k}: {' '.join(rec['elements']) or '(none)'}"
    elif which in ("edge-stabilizer", "weight-preserving-edge-stabilizer"):
        k, F = brute_min_edge_stabilizer(G, which.startswith("weight"))
        rec = {"size": k, "elements": _edges(G, F)}
        text = f"minimum {which.replace('-', ' ')} size {k}: " + \
            (", ".join("-".join(e) for e in rec["elements"]) or "(none)")
    else:
        P = enumerate_polytope_vertices(G)
        rec = {"vertices": [[str(v) for v in x] for x in P.vertices],
               "adjacent_pairs": len(P.adjacency)}
        text = f"{len(P.vertices)} vertices, {rec['adjacent_pairs']} adjacent pairs"
    rec = {"file": args.file, "oracle": which, **rec}
    _emit(args, rec, f"{args.file}: {text}")
    return 0


def _param(token: str):
    if "=" not in token:
        raise CliError(f"parameter {token!r} is not of the form key=value")
    key, value = token.split("=", 1)
    try:
        return key, Fraction(value)
    except ValueError as exc:
        raise CliError(f"parameter {key}: {value!r} is not a number") from exc


def cmd_gen(args) -> int:
    params = dict(_param(t) for t in args.param)
    try:
        G = generate_family(args.family, params, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    text = serialize_instance(G)
    if args.format == "structured":
        print(json.dumps({"family": args.family, "seed": args.seed, "instance": text}, indent=2))
    else:
        sys.stdout.write(f"# family {args.family} seed {args.seed}\n" + text)
    return 0


def cmd_verify(args) -> int:
    G = _load(args.instance)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"{args.certificate}: {exc}") from exc
    res = verify_certificate(doc, G)
    rec = {"certificate": args.certificate, "ok": res.ok, "problems": list(res.problems)}
    text = f"{args.certificate}: " + ("verified" if res.ok else "REJECTED")
    text += "".join(f"\n  {p}" for p in res.problems)
    _emit(args, rec, text)
    return 0 if res.ok else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="plain text or JSON output")
    p = argparse.ArgumentParser(prog="capstab",
                                description="Stability and stabilizers for capacitated matching games.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide stability (exit 0 stable, 1 unstable)")
    c.add_argument("files", nargs="+")
    c.add_argument("--certificate", help="write a certificate document (last file)")
    c.set_defaults(run=cmd_check)

    g = sub.add_parser("gamma", parents=[common], help="fewest odd cycles in an optimum")
    g.add_argument("file")
    g.add_argument("--exact", action="store_true", help="certified minimum (small graphs)")
    g.set_defaults(run=cmd_gamma)

    s = sub.add_parser("stabilize", parents=[common], help="compute a stabilizer")
    s.add_argument("file")
    s.add_argument("--mode", choices=("capacity", "edge"), default="capacity")
    s.add_argument("--gamma-mode", choices=("auto", "exact", "heuristic"), default="auto")
    s.add_argument("--minimalize", action="store_true", help="drop redundant elements")
    s.add_argument("--certificate", help="write a certificate document")
    s.set_defaults(run=cmd_stabilize)

    o = sub.add_parser("oracle", parents=[common], help="brute-force reference values")
    o.add_argument("which", choices=ORACLES)
    o.add_argument("file")
    o.set_defaults(run=cmd_oracle)

    n = sub.add_parser("gen", parents=[common], help="print a generated instance")
    n.add_argument("--family", choices=FAMILIES, required=True)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    n.set_defaults(run=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="re-check a certificate arithmetically")
    v.add_argument("certificate")
    v.add_argument("instance")
    v.set_defaults(run=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (CliError, ScaleError, StabilizerError) as exc:
        print(f"capstab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
