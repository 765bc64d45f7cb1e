"""Maximum-weight c-matchings, augmenting structures and alternate rounding."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import lcm

import networkx as nx

from .circuits import Circuit, classify_circuit
from .graph import (
    HALF, ONE, ZERO, CapGraph, CMatching, WalkRecord, classify_walk, indicator,
    make_walk, validate_c_matching, walk_gain,
)
from .lp import HalfVector, OddCycle, first_improving_vertex, half_vector, solve_fractional


@dataclass(frozen=True)
class MatchingResult:
    matching: CMatching
    value: Fraction
    witness: str  # "blossom" | "lp-integral" | "oracle"


def _integer_scores(G: CapGraph) -> list[int]:
    """Integer objective whose maximizers are the maximum-weight c-matchings
    that come first in the tie-break order (lowest edge ids included first)."""
    den = lcm(*(w.denominator for w in G.weights)) if G.m else 1
    shift = 1 << G.m
    return [int(w * den) * shift + (1 << (G.m - 1 - e)) for e, w in enumerate(G.weights)]


@lru_cache(maxsize=512)  # graphs are immutable and hash cheaply
def _blossom(G: CapGraph) -> CMatching:
    """Capacity copies of every vertex, three-edge gadget per edge, then a
    maximum-weight matching on the unit-capacity graph.

    With outer weight ``s+1`` and middle weight ``s+2`` for score ``s``, a
    gadget contributes ``s+2`` if unused and ``2s+2`` if used, and a lone
    outer edge is never optimal, so the matching maximizes the total score.
    """
    scores = _integer_scores(G)
    H = nx.Graph()
    for e, (u, v) in enumerate(G.edges):
        s = scores[e]
        near_u, near_v = ("g", e, 0), ("g", e, 1)
        H.add_edge(near_u, near_v, weight=s + 2)
        for i in range(G.capacities[u]):
            H.add_edge(("v", u, i), near_u, weight=s + 1)
        for j in range(G.capacities[v]):
            H.add_edge(("v", v, j), near_v, weight=s + 1)
    mate = nx.max_weight_matching(H)
    chosen = set()
    for a, b in mate:
        for node in (a, b):
            if node[0] == "g":
                other = b if node is a else a
                if other[0] == "v":
                    chosen.add(node[1])
    M = CMatching(chosen)
    if not validate_c_matching(G, M):
        raise AssertionError("gadget matching does not map to a c-matching")
    return M


def max_weight_c_matching(G: CapGraph, engine: str = "blossom",
                          certify: bool = False) -> MatchingResult:
    """Maximum-weight c-matching.

    ``engine`` is ``"blossom"`` (gadget reduction) or ``"brute"`` (exhaustive
    search).  With ``certify`` the result is checked against the LP bound and,
    if that is not tight, against the exhaustive oracle.  Among maximum
    matchings the one whose incidence vector is lexicographically largest
    (lowest edge ids included first) is returned by both engines.
    """
    if engine == "brute":
        from .oracle import brute_max_c_matching
        M, value = brute_max_c_matching(G)
        return MatchingResult(M, value, "oracle")
    if engine != "blossom":
        raise ValueError(f"unknown engine {engine!r}")
    M = _blossom(G)
    value = G.weight_of(M)
    witness = "blossom"
    if certify:
        if solve_fractional(G).primal_value == value:
            witness = "lp-integral"
        else:
            from .oracle import brute_max_c_matching
            if brute_max_c_matching(G)[1] != value:
                raise AssertionError("gadget matching is not maximum")
            witness = "oracle"
    return MatchingResult(M, value, witness)


def max_weight_value(G: CapGraph) -> Fraction:
    return G.weight_of(_blossom(G))


# -- augmenting trails --------------------------------------------------------

def _difference_trails(G: CapGraph, M: frozenset, N: frozenset) -> list[WalkRecord]:
    """Split ``M △ N`` into alternating trails.

    At every vertex the M-edges and N-edges of the difference are paired off
    as far as possible; following pairs yields trails whose unpaired ends are
    all of the same kind at each vertex, so each trail alone is proper.
    """
    diff = sorted(M ^ N)
    pair: dict[tuple[int, int], int] = {}
    for v in range(G.n):
        mine = [e for e in G.incidence[v] if e in M and e not in N]
        theirs = [e for e in G.incidence[v] if e in N and e not in M]
        for a, b in zip(sorted(mine), sorted(theirs)):
            pair[(v, a)] = b
            pair[(v, b)] = a
    used: set[int] = set()

    def follow(start, first):
        steps, cur, e = [], start, first
        while True:
            steps.append(e)
            used.add(e)
            cur = G.other(e, cur)
            nxt = pair.get((cur, e))
            if nxt is None or nxt in used:
                return make_walk(G, start, steps)
            e = nxt

    trails = []
    for e in diff:
        for v in sorted(G.edges[e]):
            if e not in used and (v, e) not in pair:
                trails.append(follow(v, e))
    for e in diff:
        if e not in used:
            trails.append(follow(min(G.edges[e]), e))
    return trails


def find_proper_augmenting_trail(G: CapGraph, M) -> WalkRecord | None:
    """A proper M-augmenting trail, or None when ``M`` is maximum."""
    M = frozenset(M)
    if not validate_c_matching(G, M):
        raise ValueError("M is not a c-matching")
    best = _blossom(G)
    if G.weight_of(best) <= G.weight_of(M):
        return None
    trails = _difference_trails(G, M, best)
    trail = max(trails, key=lambda t: walk_gain(G, M, t))
    flags = classify_walk(G, M, trail)
    if not (flags.proper and flags.augmenting and trail.is_trail()):
        raise AssertionError("difference trail failed validation")
    return trail


# -- feasible augmenting walks ----------------------------------------------

def circuit_walk(G: CapGraph, circ: Circuit) -> WalkRecord:
    """Walk that traverses every support edge ``|g_e|`` times, alternating in
    sign along the way."""
    if circ.cls in ("C1", "C2"):
        c = circ.cycles[0]
        return make_walk(G, c.vertices[0], c.edges)
    if circ.cls == "C3":
        return make_walk(G, circ.path.vertices[0], circ.path.edges)
    if circ.cls == "C4":
        p, c = circ.path, circ.cycles[0]
        return make_walk(G, p.vertices[0], p.edges + c.edges + p.edges[::-1])
    c1, c2 = circ.cycles
    if circ.path is None:
        return make_walk(G, c1.vertices[0], c1.edges + c2.edges)
    p = circ.path
    return make_walk(G, c1.vertices[0], c1.edges + p.edges + c2.edges + p.edges[::-1])


def find_feasible_augmenting_walk(G: CapGraph, M) -> WalkRecord | None:
    """A feasible M-augmenting walk, or None when the indicator of ``M`` is an
    optimal fractional c-matching.

    The simplex is warm-started at ``M``; its first move reaches an adjacent
    vertex ``x_M + alpha*g`` of higher weight, and the circuit ``g`` is read
    off as a closed or open alternating walk.
    """
    M = frozenset(M)
    if not validate_c_matching(G, M):
        raise ValueError("M is not a c-matching")
    y = first_improving_vertex(G, M)
    if y is None:
        return None
    x = indicator(G, M)
    d = [b - a for a, b in zip(x, y)]
    alpha = ONE if all(a.denominator == 1 for a in d) else HALF
    circ = classify_circuit(G, [a / alpha for a in d])
    W = circuit_walk(G, circ)
    flags = classify_walk(G, M, W)
    if not (flags.feasible and flags.augmenting):
        raise AssertionError(f"walk from circuit {circ.cls} failed validation: {flags}")
    return W


# -- alternate rounding -----------------------------------------------------

def _rotate(G: CapGraph, cycle: OddCycle, v: int) -> list[int]:
    i = cycle.vertices.index(v)
    return list(cycle.edges[i:] + cycle.edges[:i])


def alternate_round(G: CapGraph, x: HalfVector, cycle: OddCycle, v: int,
                    mode: str = "exposing") -> HalfVector | tuple[Fraction, ...]:
    """Round the half-valued ``cycle`` of ``x`` to integers around ``v``.

    Walking the cycle from ``v`` as ``e_1, ..., e_{2k+1}``, ``exposing`` puts
    odd-indexed edges at 0 and even-indexed edges at 1; ``covering`` uses the
    opposite pattern, so both cycle edges at ``v`` become 1.  Exposing keeps a
    basic vector basic and is returned as a :class:`HalfVector`; covering
    raises the load at ``v`` by one and is returned as a plain tuple.
    """
    if mode not in ("exposing", "covering"):
        raise ValueError(f"unknown mode {mode!r}")
    if not any(set(cycle.edges) == set(c.edges) for c in x.cycles):
        raise ValueError("cycle is not a fractional cycle of x")
    if v not in cycle.vertices:
        raise ValueError(f"vertex {v} is not on the cycle")
    vals = list(x.values)
    odd_value = ZERO if mode == "exposing" else ONE
    for i, e in enumerate(_rotate(G, cycle, v)):
        vals[e] = odd_value if i % 2 == 0 else ONE - odd_value
    if mode == "exposing":
        return half_vector(G, vals)
    return tuple(vals)
