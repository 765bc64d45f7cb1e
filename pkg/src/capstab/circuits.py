"""Circuits of the fractional c-matching polytope.

A circuit is an integral edge vector ``g`` of one of five shapes:

``C1``  even cycle, entries +-1, balanced at every vertex;
``C2``  odd cycle, entries +-1, exactly one unbalanced vertex;
``C3``  path, entries +-1, balanced at internal vertices;
``C4``  odd cycle (+-1) plus a non-empty path (+-2) hanging off one cycle
        vertex, balanced at every vertex of degree at least two;
``C5``  two odd cycles (+-1) joined by a path (+-2), or sharing exactly one
        vertex when the path is empty, balanced everywhere.

"Balanced at v" means ``g(delta(v)) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from .graph import CapGraph
from .lp import check_primal, decompose_support

CLASSES = ("C1", "C2", "C3", "C4", "C5")


class CircuitError(ValueError):
    """The vector is not a circuit; the message names the failed condition."""


class Trace(NamedTuple):
    """Vertex/edge sequence; for a closed trace ``vertices[0]`` is repeated
    implicitly, i.e. ``edges[-1]`` returns to ``vertices[0]``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    coefficients: tuple[int, ...]
    cls: str
    cycles: tuple[Trace, ...]       # C1: the even cycle; C2/C4: one; C5: two
    path: Trace | None              # C3/C4/C5 path (C5 with shared vertex: None)
    special: int | None             # C2 unbalanced vertex, C4 free path end
    scale: int = 1                  # gcd divided out of the input

    @property
    def support(self) -> frozenset:
        return frozenset(e for e, g in enumerate(self.coefficients) if g)

    def negated(self) -> tuple[int, ...]:
        return tuple(-g for g in self.coefficients)


def _adjacency(G: CapGraph, edges):
    adj: dict[int, list[int]] = {}
    for e in sorted(edges):
        u, v = G.edges[e]
        adj.setdefault(u, []).append(e)
        adj.setdefault(v, []).append(e)
    return adj


def _components(G: CapGraph, edges):
    adj = _adjacency(G, edges)
    seen, out = set(), []
    for s in sorted(adj):
        if s in seen:
            continue
        comp, stack = set(), [s]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(G.other(e, u) for e in adj[u])
        seen |= comp
        out.append(frozenset(e for e in edges if G.edges[e][0] in comp))
    return out


def _walk_along(G: CapGraph, adj, start: int, first: int) -> Trace:
    vs, es = [start], [first]
    prev, cur = first, G.other(first, start)
    while True:
        nxt = [e for e in adj[cur] if e != prev]
        if cur == start or not nxt:
            break
        vs.append(cur)
        es.append(nxt[0])
        prev, cur = nxt[0], G.other(nxt[0], cur)
    if cur != start:
        vs.append(cur)
    return Trace(tuple(vs), tuple(es))


def trace_cycle(G: CapGraph, edges, start: int | None = None) -> Trace | None:
    """Trace ``edges`` as a single cycle from ``start`` (default: its smallest
    vertex), or return None if they do not form one cycle."""
    adj = _adjacency(G, edges)
    if not adj or any(len(a) != 2 for a in adj.values()) or len(_components(G, edges)) != 1:
        return None
    if start is None:
        start = min(adj)
    if start not in adj:
        return None
    return _walk_along(G, adj, start, adj[start][0])


def trace_path(G: CapGraph, edges) -> Trace | None:
    """Trace ``edges`` as a simple path from its smaller end, or None."""
    adj = _adjacency(G, edges)
    if not adj or any(len(a) > 2 for a in adj.values()) or len(_components(G, edges)) != 1:
        return None
    ends = sorted(v for v, a in adj.items() if len(a) == 1)
    if len(ends) != 2:
        return None
    return _walk_along(G, adj, ends[0], adj[ends[0]][0])


def _imbalance(G: CapGraph, g: Sequence[int], v: int) -> int:
    return sum(g[e] for e in G.incidence[v])


def _normalize(g) -> tuple[tuple[int, ...], int]:
    ints = []
    for a in g:
        a = Fraction(a)
        if a.denominator != 1:
            raise CircuitError(f"entry {a} is not an integer")
        ints.append(int(a))
    d = 0
    for a in ints:
        d = gcd(d, a)
    if d == 0:
        raise CircuitError("zero vector")
    ints = [a // d for a in ints]
    first = next(a for a in ints if a)
    if first < 0:
        ints = [-a for a in ints]
    return tuple(ints), d


def classify_circuit(G: CapGraph, g: Sequence) -> Circuit:
    """Identify the class and witnessing structure of ``g``.

    The vector is divided by the gcd of its entries and signed so that its
    first nonzero entry is positive; the divisor is kept in ``scale``.
    Raises :class:`CircuitError` with the first violated condition.
    """
    if len(g) != G.m:
        raise CircuitError(f"vector has {len(g)} entries for {G.m} edges")
    g, scale = _normalize(g)
    support = [e for e, a in enumerate(g) if a]
    if any(abs(g[e]) > 2 for e in support):
        raise CircuitError("entry outside {-2,...,2}")
    ones = frozenset(e for e in support if abs(g[e]) == 1)
    twos = frozenset(e for e in support if abs(g[e]) == 2)
    verts = sorted({v for e in support for v in G.edges[e]})
    unbalanced = [v for v in verts if _imbalance(G, g, v)]

    def build(cls, cycles, path=None, special=None):
        return Circuit(g, cls, tuple(cycles), path, special, scale)

    if not twos:
        cyc = trace_cycle(G, ones)
        if cyc is not None:
            if len(cyc.edges) % 2 == 0:
                if unbalanced:
                    raise CircuitError("even cycle is not alternating")
                return build("C1", [cyc])
            if len(unbalanced) != 1:
                raise CircuitError("odd cycle must have exactly one unbalanced vertex")
            w = unbalanced[0]
            return build("C2", [trace_cycle(G, ones, w)], special=w)
        path = trace_path(G, ones)
        if path is not None:
            inner = path.vertices[1:-1]
            if any(_imbalance(G, g, v) for v in inner):
                raise CircuitError("path is unbalanced at an internal vertex")
            return build("C3", [], path)
        return _bowtie(G, g, ones, unbalanced, build)

    if not ones:
        raise CircuitError("entries of magnitude two without any odd cycle")
    path = trace_path(G, twos)
    if path is None:
        raise CircuitError("edges with entry +-2 do not form a simple path")
    comps = _components(G, ones)
    cycles = []
    for comp in comps:
        c = trace_cycle(G, comp)
        if c is None or len(c.edges) % 2 == 0:
            raise CircuitError("edges with entry +-1 do not form odd cycles")
        cycles.append(c)
    cyc_vertex = {}
    for i, c in enumerate(cycles):
        for v in c.vertices:
            cyc_vertex[v] = i
    a, b = path.vertices[0], path.vertices[-1]
    if any(v in cyc_vertex for v in path.vertices[1:-1]):
        raise CircuitError("path passes through a cycle vertex")
    if len(cycles) == 1:
        if (a in cyc_vertex) == (b in cyc_vertex):
            raise CircuitError("path must meet the odd cycle at exactly one end")
        if a in cyc_vertex:
            path = Trace(path.vertices[::-1], path.edges[::-1])
        t, junction = path.vertices[0], path.vertices[-1]
        bad = [v for v in verts if v != t and _imbalance(G, g, v)]
        if bad:
            raise CircuitError(f"vertex {G.labels[bad[0]]} of degree >= 2 is unbalanced")
        return build("C4", [trace_cycle(G, cycles[0].edges, junction)], path, special=t)
    if len(cycles) == 2:
        if a not in cyc_vertex or b not in cyc_vertex or cyc_vertex[a] == cyc_vertex[b]:
            raise CircuitError("path must join the two odd cycles at its ends")
        if unbalanced:
            raise CircuitError(f"vertex {G.labels[unbalanced[0]]} is unbalanced")
        if cyc_vertex[a] != 0:
            cycles.reverse()
        return build("C5", [trace_cycle(G, cycles[0].edges, a),
                            trace_cycle(G, cycles[1].edges, b)], path)
    raise CircuitError("more than two odd cycles")


def _bowtie(G, g, ones, unbalanced, build) -> Circuit:
    adj = _adjacency(G, ones)
    hubs = [v for v, a in adj.items() if len(a) == 4]
    if len(hubs) != 1 or any(len(a) != 2 for v, a in adj.items() if v != hubs[0]):
        raise CircuitError("support is not a cycle, a path, or two cycles at one vertex")
    hub = hubs[0]
    rest = {e for e in ones if hub not in G.edges[e]}
    parts = []
    for first in adj[hub]:
        if any(first in p.edges for p in parts):
            continue
        parts.append(_walk_along(G, adj, hub, first))
    if len(_components(G, ones)) != 1 or len(parts) != 2:
        raise CircuitError("support is not connected")
    if sum(len(p.edges) for p in parts) != len(rest) + 4:
        raise CircuitError("support is not two cycles at one vertex")
    if any(len(p.edges) % 2 == 0 for p in parts):
        raise CircuitError("cycles sharing a vertex must both be odd")
    if unbalanced:
        raise CircuitError(f"vertex {G.labels[unbalanced[0]]} is unbalanced")
    parts.sort(key=lambda p: min(p.edges))
    return build("C5", parts, None)


# -- application -------------------------------------------------------------

class Applied(NamedTuple):
    point: tuple[Fraction, ...] | None
    violations: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return self.point is not None


def apply_circuit(G: CapGraph, x: Sequence[Fraction], g, alpha) -> Applied:
    """``x + alpha*g`` if it stays in the polytope, else the violated bounds."""
    alpha = Fraction(alpha)
    if alpha not in (Fraction(1, 2), Fraction(1)):
        raise ValueError("step length must be 1/2 or 1")
    problems = check_primal(G, x)
    if problems:
        raise ValueError("start point infeasible: " + "; ".join(problems))
    coeffs = g.coefficients if isinstance(g, Circuit) else tuple(g)
    y = tuple(Fraction(a) + alpha * c for a, c in zip(x, coeffs))
    problems = check_primal(G, y)
    if problems:
        return Applied(None, tuple(problems))
    return Applied(y, ())


# -- adjacency differences ---------------------------------------------------

ALLOWED = {
    Fraction(1): {"C1": {0}, "C2": {0}, "C3": {0}},
    Fraction(1, 2): {"C1": {0}, "C2": {-1, 1}, "C4": {-1, 1}, "C5": {-2, 0, 2}},
}


@dataclass(frozen=True)
class Step:
    """Outcome of :func:`vertex_difference`."""

    accepted: bool
    alpha: Fraction | None = None
    circuit: Circuit | None = None
    sign: int = 1                       # y - x = sign * alpha * circuit
    predicted: frozenset = frozenset()  # allowed cycle-count deltas
    delta: int | None = None            # |C(y)| - |C(x)|
    consistent: bool = False
    reason: str = ""


def vertex_difference(G: CapGraph, x, y) -> Step:
    """Decompose ``y - x`` as ``alpha*g`` and check the odd-cycle bookkeeping.

    Passing :class:`HalfVector` inputs skips re-deriving their cycles.
    """
    cx, _ = decompose_support(G, x)
    cy, _ = decompose_support(G, y)
    d = [b - a for a, b in zip(x, y)]
    if not any(d):
        return Step(False, reason="x equals y")
    alpha = Fraction(1) if all(a.denominator == 1 for a in d) else Fraction(1, 2)
    raw = [a / alpha for a in d]
    try:
        circ = classify_circuit(G, raw)
    except CircuitError as exc:
        return Step(False, alpha=alpha, reason=str(exc))
    if circ.scale != 1:
        return Step(False, alpha=alpha, reason=f"difference is {circ.scale} times a circuit")
    sign = 1 if tuple(int(a) for a in raw) == circ.coefficients else -1
    delta = len(cy) - len(cx)
    allowed = ALLOWED[alpha].get(circ.cls)
    if allowed is None:
        return Step(True, alpha, circ, sign, frozenset(), delta, False,
                    f"class {circ.cls} is outside the case table for step {alpha}")
    ok = delta in allowed
    if ok and alpha == Fraction(1, 2) and circ.cls in ("C2", "C4"):
        odd = frozenset(circ.cycles[0].edges)
        ok = any(frozenset(c.edges) == odd for c in (*cx, *cy))
    return Step(True, alpha, circ, sign, frozenset(allowed), delta, ok,
                "" if ok else "odd-cycle bookkeeping differs from the case table")
