"""Instance text format and stabilization certificates.

Instance format, one directive per line, ``#`` starts a comment::

    graph <n> <m>
    vertex <id> <capacity>
    edge <id> <id> <weight>

Vertices must be declared before edges use them.  Weights are non-negative
integers or ``p/q`` fractions.  Certificates are JSON documents with a fixed
key order; every rational is written as a string such as ``"25/2"``.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .graph import CapGraph, GraphError, indicator, validate_c_matching
from .lp import DualCover, check_complementary_slackness, check_dual, check_primal
from .stabilize import Certificate, StabilityCheck, StabReport, apply_stabilizer

FORMAT = "capstab-certificate/1"
_WEIGHT = re.compile(r"^(\d+)(?:/(\d+))?$")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column, self.message = line, column, message


def _tokens(raw: str):
    """(column, token) pairs, columns 1-based."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", raw)]


def _parse_count(tok, lineno, col, what):
    if not tok.isdigit():
        raise ParseError(lineno, col, f"{what} must be a non-negative integer, got {tok!r}")
    return int(tok)


def parse_weight(tok: str) -> Fraction:
    m = _WEIGHT.match(tok)
    if not m:
        raise ValueError(f"weight must be a non-negative integer or p/q, got {tok!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ValueError("zero denominator")
    return Fraction(num, den)


def parse_instance(text: str) -> CapGraph:
    header = None
    vertices: dict[str, tuple[int, int]] = {}   # label -> (capacity, line)
    order: list[str] = []
    edges: list[tuple[str, str, Fraction]] = []
    seen_edges: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if not toks:
            continue
        col, kw = toks[0]
        if header is None:
            if kw != "graph":
                raise ParseError(lineno, col, "expected 'graph <n> <m>' header first")
            if len(toks) != 3:
                raise ParseError(lineno, col, "header takes exactly two counts")
            header = (_parse_count(toks[1][1], lineno, toks[1][0], "vertex count"),
                      _parse_count(toks[2][1], lineno, toks[2][0], "edge count"), lineno)
            continue
        if kw == "vertex":
            if len(toks) != 3:
                raise ParseError(lineno, col, "expected 'vertex <id> <capacity>'")
            (c1, label), (c2, cap) = toks[1], toks[2]
            if label in vertices:
                raise ParseError(lineno, c1, f"vertex {label!r} already declared on line "
                                             f"{vertices[label][1]}")
            if cap.startswith("-"):
                raise ParseError(lineno, c2, f"negative capacity {cap}")
            vertices[label] = (_parse_count(cap, lineno, c2, "capacity"), lineno)
            order.append(label)
        elif kw == "edge":
            if len(toks) != 4:
                raise ParseError(lineno, col, "expected 'edge <u> <v> <weight>'")
            (cu, u), (cv, v), (cw, w) = toks[1], toks[2], toks[3]
            for c, lab in ((cu, u), (cv, v)):
                if lab not in vertices:
                    raise ParseError(lineno, c, f"undeclared vertex {lab!r}")
            if u == v:
                raise ParseError(lineno, cv, f"self-loop at {u!r}")
            key = frozenset((u, v))
            if key in seen_edges:
                raise ParseError(lineno, cu, f"duplicate edge {u}-{v} (first on line "
                                             f"{seen_edges[key]}, again on line {lineno})")
            if w.startswith("-"):
                raise ParseError(lineno, cw, f"negative weight {w}")
            try:
                weight = parse_weight(w)
            except ValueError as exc:
                raise ParseError(lineno, cw, str(exc)) from None
            seen_edges[key] = lineno
            edges.append((u, v, weight))
        elif kw == "graph":
            raise ParseError(lineno, col, f"second header (first on line {header[2]})")
        else:
            raise ParseError(lineno, col, f"unknown directive {kw!r}")
    if header is None:
        raise ParseError(1, 1, "missing 'graph <n> <m>' header")
    n, m, hline = header
    if len(order) != n:
        raise ParseError(hline, 1, f"header declares {n} vertices, body has {len(order)}")
    if len(edges) != m:
        raise ParseError(hline, 1, f"header declares {m} edges, body has {len(edges)}")
    try:
        return CapGraph.build([(lab, vertices[lab][0]) for lab in order], edges)
    except GraphError as exc:
        raise ParseError(hline, 1, str(exc)) from None


def serialize_instance(G: CapGraph) -> str:
    lines = [f"graph {G.n} {G.m}"]
    lines += [f"vertex {lab} {c}" for lab, c in zip(G.labels, G.capacities)]
    lines += [f"edge {G.labels[u]} {G.labels[v]} {w}" for (u, v), w in zip(G.edges, G.weights)]
    return "\n".join(lines) + "\n"


def instance_digest(G: CapGraph) -> str:
    return hashlib.sha256(serialize_instance(G).encode()).hexdigest()


# -- certificates -------------------------------------------------------------

def _q(value: Fraction) -> str:
    return str(value)


def _edge_entries(G: CapGraph, values, ids=None):
    ids = range(G.m) if ids is None else ids
    return [[G.labels[G.edges[e][0]], G.labels[G.edges[e][1]], _q(values[e])] for e in ids]


def _dual_doc(G: CapGraph, yz: DualCover):
    return {"y": {G.labels[v]: _q(yz.y[v]) for v in range(G.n)},
            "z": _edge_entries(G, yz.z)}


def _matching_doc(G: CapGraph, M):
    return [[G.labels[G.edges[e][0]], G.labels[G.edges[e][1]]] for e in sorted(M)]


def _slackness_lines(G: CapGraph, x, yz: DualCover) -> list[str]:
    ok, violations = check_complementary_slackness(G, x, yz)
    if ok:
        return [f"all {G.m} edge-tight, {G.n} vertex-saturated and {G.m} edge-at-one clauses hold"]
    return [f"{v.clause} fails at {v.kind} {v.index}: {v.detail}" for v in violations]


def emit_certificate(G: CapGraph, check: StabilityCheck, report: StabReport | None) -> dict:
    """Certificate document for ``G``; ``report`` may be None for stable graphs."""
    lp = check.fractional
    doc = {
        "format": FORMAT,
        "instance_digest": instance_digest(G),
        "verdict": "stable" if check.stable else "unstable",
        "primal_matching": _matching_doc(G, check.matching),
        "weight_before": _q(check.value),
        "fractional_optimum": _edge_entries(G, lp.primal.values),
        "fractional_value": _q(lp.primal_value),
        "dual": _dual_doc(G, lp.dual),
        "slackness": _slackness_lines(G, lp.primal.values, lp.dual),
    }
    if report is None:
        H, M, yz, after = G, check.matching, lp.dual, check.value
        stab = {"kind": "capacity", "elements": [], "size": 0, "lower_bound": 0}
    else:
        H, M, yz, after = (report.stabilized, report.certificate.matching,
                           report.certificate.dual, report.weight_after)
        if report.kind == "capacity":
            elements = [G.labels[v] for v in report.solution]
        else:
            elements = _matching_doc(G, report.solution)
        stab = {"kind": report.kind, "elements": elements, "size": report.size,
                "lower_bound": report.lower_bound}
    doc["stabilizer"] = stab
    doc["stabilized"] = {
        "matching": _matching_doc(H, M),
        "dual": _dual_doc(H, yz),
        "slackness": _slackness_lines(H, indicator(H, M), yz),
    }
    doc["weight_after"] = _q(after)
    return doc


def dump_certificate(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class Verification:
    ok: bool
    problems: tuple[str, ...]

    def __bool__(self):
        return self.ok


def _read_q(tok, where, problems):
    if isinstance(tok, bool) or not isinstance(tok, (str, int)):
        problems.append(f"{where}: unreadable number {tok!r}")
        return None
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        problems.append(f"{where}: unreadable number {tok!r}")
        return None


def _read_matching(G: CapGraph, entries, where, problems):
    pos = {lab: i for i, lab in enumerate(G.labels)}
    out = set()
    for ent in entries:
        try:
            u, v = pos[ent[0]], pos[ent[1]]
            out.add(G.edge_id(u, v))
        except (KeyError, IndexError, GraphError, TypeError):
            problems.append(f"{where}: unknown edge {ent!r}")
    return out


def _read_edge_vector(G, entries, where, problems):
    vals = [None] * G.m
    pos = {lab: i for i, lab in enumerate(G.labels)}
    for ent in entries:
        try:
            e = G.edge_id(pos[ent[0]], pos[ent[1]])
        except (KeyError, IndexError, GraphError, TypeError):
            problems.append(f"{where}: unknown edge {ent!r}")
            continue
        vals[e] = _read_q(ent[2], f"{where} edge {ent[0]}-{ent[1]}", problems)
    if any(v is None for v in vals):
        problems.append(f"{where}: missing or unreadable entries")
        return None
    return vals


def _read_dual(G, doc, where, problems):
    y = []
    for lab in G.labels:
        if lab not in doc.get("y", {}):
            problems.append(f"{where}: no y value for vertex {lab}")
            return None
        y.append(_read_q(doc["y"][lab], f"{where} y at vertex {lab}", problems))
    z = _read_edge_vector(G, doc.get("z", []), f"{where} z", problems)
    if z is None or any(v is None for v in y):
        return None
    return DualCover(tuple(y), tuple(z))


def _certify_pair(G, x, yz, where, problems):
    before = len(problems)
    problems += [f"{where}: {p}" for p in check_primal(G, x)]
    problems += [f"{where}: {p}" for p in check_dual(G, yz)]
    short = [set(G.edges[e]) for e in range(G.m) if yz.slack(G, e) < 0] if len(yz.z) == G.m else []
    if short:
        common = set.intersection(*short)
        suspects = " or ".join(f"vertex {G.labels[v]}" for v in sorted(common))
        if suspects:
            problems.append(f"{where}: every uncovered edge meets {suspects}; check its y value")
    if len(problems) > before:
        return
    _, violations = check_complementary_slackness(G, x, yz)
    for v in violations:
        if v.kind == "vertex":
            at = f"vertex {G.labels[v.index]}"
        else:
            p, q = (G.labels[u] for u in G.edges[v.index])
            at = f"edge {p}-{q} (vertex {p}, vertex {q})"
        problems.append(f"{where}: {v.clause} clause fails at {at} ({v.detail})")
    if G.value(x) != yz.value(G):
        problems.append(f"{where}: primal value {G.value(x)} differs from cover value {yz.value(G)}")


def verify_certificate(doc: dict, G: CapGraph) -> Verification:
    """Re-check a certificate against ``G`` using arithmetic only.

    Confirms the fractional optimum against its dual, the matching weights,
    the verdict, and that the stabilized graph carries a matching and cover
    of equal value satisfying slackness.
    """
    problems: list[str] = []
    if doc.get("format") != FORMAT:
        problems.append(f"unknown format {doc.get('format')!r}")
    if doc.get("instance_digest") != instance_digest(G):
        problems.append("instance digest mismatch")
        return Verification(False, tuple(problems))
    x = _read_edge_vector(G, doc.get("fractional_optimum", []), "fractional optimum", problems)
    yz = _read_dual(G, doc.get("dual", {}), "dual", problems)
    nu_f = _read_q(doc.get("fractional_value"), "fractional value", problems)
    if x is not None and yz is not None:
        _certify_pair(G, x, yz, "fractional optimum", problems)
        if nu_f is not None and G.value(x) != nu_f:
            problems.append(f"fractional value {nu_f} differs from recomputed {G.value(x)}")
    M = _read_matching(G, doc.get("primal_matching", []), "primal matching", problems)
    before = _read_q(doc.get("weight_before"), "weight before", problems)
    if not validate_c_matching(G, M):
        problems.append("primal matching exceeds a capacity")
    if before is not None and G.weight_of(M) != before:
        problems.append(f"primal matching weighs {G.weight_of(M)}, not {before}")
    if nu_f is not None and before is not None:
        verdict = "stable" if before == nu_f else "unstable"
        if before > nu_f:
            problems.append("matching weight exceeds the fractional optimum")
        if doc.get("verdict") != verdict:
            problems.append(f"verdict {doc.get('verdict')!r} but weights say {verdict}")
    stab = doc.get("stabilizer", {})
    H = _stabilized_graph(G, stab, problems)
    if H is not None:
        sdoc = doc.get("stabilized", {})
        MH = _read_matching(H, sdoc.get("matching", []), "stabilized matching", problems)
        yzH = _read_dual(H, sdoc.get("dual", {}), "stabilized dual", problems)
        if yzH is not None:
            _certify_pair(H, indicator(H, MH), yzH, "stabilized", problems)
        after = _read_q(doc.get("weight_after"), "weight after", problems)
        if after is not None and H.weight_of(MH) != after:
            problems.append(f"stabilized matching weighs {H.weight_of(MH)}, not {after}")
        if stab.get("size") != len(stab.get("elements", [])):
            problems.append("stabilizer size does not match its elements")
    return Verification(not problems, tuple(problems))


def _stabilized_graph(G: CapGraph, stab: dict, problems) -> CapGraph | None:
    kind = stab.get("kind")
    elements = stab.get("elements", [])
    pos = {lab: i for i, lab in enumerate(G.labels)}
    try:
        if kind == "capacity":
            return apply_stabilizer(G, [pos[lab] for lab in elements], "capacity")
        if kind == "edge":
            ids = _read_matching(G, elements, "stabilizer", problems)
            return apply_stabilizer(G, sorted(ids), "edge")
    except (KeyError, ValueError) as exc:
        problems.append(f"stabilizer cannot be applied: {exc}")
        return None
    problems.append(f"unknown stabilizer kind {kind!r}")
    return None


__all__ = [
    "ParseError", "parse_instance", "serialize_instance", "instance_digest", "parse_weight",
    "emit_certificate", "dump_certificate", "verify_certificate", "Verification", "Certificate",
]
