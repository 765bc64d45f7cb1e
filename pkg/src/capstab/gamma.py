"""Basic maximum-weight fractional c-matchings with few odd cycles.

Two engines find an optimum ``x`` minimizing the number of half-valued odd
cycles:

* ``heuristic``: start from the simplex optimum and apply weight-preserving
  half steps that round one cycle (optionally along an alternating path to a
  free vertex) or two cycles joined by an alternating path.
* ``exact``: restrict to the optimal face cut out by the dual, and enumerate
  families of vertex-disjoint odd cycles by size; each family is tested for an
  integral completion by a single matching computation.

The module also builds the unit-capacity auxiliary graph (vertex copies plus
a three-edge path per edge) and translates its optima back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .config import ScaleError, oracle_max_edges, require
from .graph import (
    HALF, ONE, ZERO, CapGraph, cycle_vertices, disjoint_families, odd_cycles,
)
from .lp import DualCover, HalfVector, OddCycle, check_primal, half_vector, solve_fractional
from .matching import alternate_round, max_weight_value

# -- unit-capacity reduction ---------------------------------------------------


@dataclass(frozen=True)
class UnitReduction:
    """``graph`` has unit capacities.  For original edge ``e = (u, v)``:
    ``near[e] = (a, b)`` with ``a`` adjacent to the copies of ``u`` and ``b``
    to the copies of ``v``; ``outer_u[e][i]`` joins ``copies[u][i]`` to ``a``,
    ``middle[e]`` joins ``a`` and ``b``, ``outer_v[e][j]`` joins ``b`` to
    ``copies[v][j]``.  All three kinds carry weight ``w_e``."""

    source: CapGraph
    graph: CapGraph
    copies: tuple[tuple[int, ...], ...]
    near: tuple[tuple[int, int], ...]
    outer_u: tuple[tuple[int, ...], ...]
    middle: tuple[int, ...]
    outer_v: tuple[tuple[int, ...], ...]
    offset: Fraction


def to_unit_capacity(G: CapGraph) -> UnitReduction:
    labels, copies = [], []
    for v in range(G.n):
        copies.append(tuple(range(len(labels), len(labels) + G.capacities[v])))
        labels.extend(f"{G.labels[v]}:{i}" for i in range(G.capacities[v]))
    near = []
    for e, (u, v) in enumerate(G.edges):
        near.append((len(labels), len(labels) + 1))
        labels.append(f"[{e}]{G.labels[v]}")
        labels.append(f"[{e}]{G.labels[u]}")
    edges, weights = [], []
    outer_u, middle, outer_v = [], [], []

    def add(a, b, w):
        edges.append((a, b))
        weights.append(w)
        return len(edges) - 1

    for e, (u, v) in enumerate(G.edges):
        a, b = near[e]
        w = G.weights[e]
        outer_u.append(tuple(add(c, a, w) for c in copies[u]))
        middle.append(add(a, b, w))
        outer_v.append(tuple(add(b, c, w) for c in copies[v]))
    H = CapGraph(tuple(labels), (1,) * len(labels), tuple(edges), tuple(weights))
    return UnitReduction(G, H, tuple(copies), tuple(near), tuple(outer_u),
                         tuple(middle), tuple(outer_v), G.total_weight)


class TranslationError(ValueError):
    """A gadget is in none of the recognised configurations."""


@dataclass(frozen=True)
class Translation:
    x: HalfVector            # on the original graph
    x_hat: HalfVector        # normalized vector on the auxiliary graph
    repairs: int             # cycle-removing repairs that were needed


def _normalize(R: UnitReduction, xh: list[Fraction]) -> None:
    """Rewrite twin-copy detours and lone outer edges in place; neither
    changes the weight or the number of half-valued cycles."""
    H = R.graph
    changed = True
    while changed:
        changed = False
        for e in range(R.source.m):
            for side, node in ((R.outer_u[e], R.near[e][0]), (R.outer_v[e], R.near[e][1])):
                halves = [f for f in side if xh[f] == HALF]
                if len(halves) == 2:
                    keep, move = halves
                    ci = H.other(keep, node)
                    ck = H.other(move, node)
                    back = next(f for f in H.incidence[ci] if f != keep and xh[f] == HALF)
                    p = H.other(back, ci)
                    xh[keep], xh[move] = ONE, ZERO
                    xh[back] = ZERO
                    xh[H.edge_id(p, ck)] = HALF
                    changed = True
            a_sum = sum((xh[f] for f in R.outer_u[e]), ZERO)
            b_sum = sum((xh[f] for f in R.outer_v[e]), ZERO)
            if xh[R.middle[e]] == 0 and {a_sum, b_sum} == {ZERO, ONE}:
                for f in R.outer_u[e] + R.outer_v[e]:
                    xh[f] = ZERO
                xh[R.middle[e]] = ONE
                changed = True


def _read_back(R: UnitReduction, xh) -> list[Fraction]:
    x = []
    for e in range(R.source.m):
        mid = xh[R.middle[e]]
        a = sum((xh[f] for f in R.outer_u[e]), ZERO)
        b = sum((xh[f] for f in R.outer_v[e]), ZERO)
        if mid == 1:
            x.append(ZERO)
        elif mid == 0 and a == 1 and b == 1:
            x.append(ONE)
        elif mid == HALF and a == HALF and b == HALF:
            x.append(HALF)
        else:
            raise TranslationError(
                f"gadget of edge {R.source.edge_label(e)} has outer sums {a}, {b} and middle {mid}")
    return x


def translate_from_unit(R: UnitReduction, x_hat: Sequence[Fraction]) -> Translation:
    """Map a basic optimum of the auxiliary graph to one of the original.

    Gadgets are first normalized; if a cycle vertex of the result is then
    unsaturated, the corresponding auxiliary cycle is removed by matching an
    exposed copy into the gadget and rounding the cycle, and translation is
    repeated.  An auxiliary cycle through two copies of one vertex reads back
    as an odd closed trail; its even closed sub-trails are rounded away.  The
    repair count is zero whenever ``x_hat`` has the fewest possible cycles.
    """
    G, H = R.source, R.graph
    xh = list(x_hat)
    if check_primal(H, xh):
        raise TranslationError("auxiliary vector is infeasible")
    repairs = 0
    while True:
        _normalize(R, xh)
        x = _read_back(R, xh)
        bad = _unsaturated_cycle_vertex(G, x)
        if bad is None:
            break
        u, e = bad
        copy = next(c for c in R.copies[u] if H.load(xh, c) == 0)
        node = R.near[e][0] if G.edges[e][0] == u else R.near[e][1]
        hv = half_vector(H, xh)
        cyc = next(c for c in hv.cycles if node in c.vertices)
        xh = list(alternate_round(H, hv, cyc, node, "exposing").values)
        xh[H.edge_id(copy, node)] = ONE
        repairs += 1
    xhat = half_vector(H, xh)
    _split_trails(G, x)
    result = half_vector(G, x)
    repairs += xhat.cycle_count - result.cycle_count
    return Translation(result, xhat, repairs)


def _split_trails(G: CapGraph, x: list[Fraction]) -> None:
    """Round even closed trails of half edges until every component of the
    half support is a simple cycle.  Loads are unchanged; the direction with
    the larger weight is taken, which for an optimal ``x`` is a tie."""
    while True:
        S = nx.Graph()
        S.add_edges_from(G.edges[e] for e in range(G.m) if x[e] == HALF)
        trail = None
        for comp in nx.connected_components(S):
            C = S.subgraph(comp)
            if any(d % 2 for _, d in C.degree()) or max(d for _, d in C.degree()) == 2:
                continue
            walk = [u for u, _ in nx.eulerian_circuit(C, source=min(comp))]
            ids = [G.edge_id(walk[k], walk[(k + 1) % len(walk)]) for k in range(len(walk))]
            if len(ids) % 2:
                i, j = _repeat(walk)
                ids = ids[i:j] if (j - i) % 2 == 0 else ids[j:] + ids[:i]
            trail = ids
            break
        if trail is None:
            return
        gain = sum((G.weights[e] if k % 2 == 0 else -G.weights[e]) for k, e in enumerate(trail))
        first = ONE if gain >= 0 else ZERO
        for k, e in enumerate(trail):
            x[e] = first if k % 2 == 0 else ONE - first


def _repeat(walk):
    seen = {}
    for k, v in enumerate(walk):
        if v in seen:
            return seen[v], k
        seen[v] = k
    raise AssertionError("closed trail with a vertex of degree four has a repeat")


def _unsaturated_cycle_vertex(G: CapGraph, x):
    for e, xe in enumerate(x):
        if xe == HALF:
            for u in G.edges[e]:
                if G.load(x, u) < G.capacities[u]:
                    return u, min(f for f in G.incidence[u] if x[f] == HALF)
    return None


# -- heuristic engine ---------------------------------------------------------

@dataclass(frozen=True)
class CycleOptimum:
    x: HalfVector
    dual: DualCover
    value: Fraction
    cycle_count: int
    flag: str  # "exact" | "certified" | "uncertified"


def _round(G, x, cycle: OddCycle, at: int, gain_at_vertex: int, vals):
    """Round ``cycle`` in ``vals`` so the load at ``at`` changes by
    ``gain_at_vertex`` (-1 exposes, +1 covers)."""
    i = cycle.vertices.index(at)
    seq = cycle.edges[i:] + cycle.edges[:i]
    odd = ZERO if gain_at_vertex < 0 else ONE
    for k, e in enumerate(seq):
        vals[e] = odd if k % 2 == 0 else ONE - odd


def _try(G, x: HalfVector, value, vals):
    if check_primal(G, vals) or G.value(vals) != value:
        return None
    try:
        hv = half_vector(G, vals)
    except ValueError:
        return None
    return hv if hv.cycle_count < x.cycle_count else None


def _improving_move(G: CapGraph, x: HalfVector, yz: DualCover, budget: int = 20000):
    value = G.value(x.values)
    usable = [x[e] in (ZERO, ONE) and yz.z[e] == 0 and yz.slack(G, e) == 0 for e in range(G.m)]
    owner = {}
    for idx, c in enumerate(x.cycles):
        for v in c.vertices:
            owner[v] = idx
    steps = [0]
    for idx, cyc in enumerate(x.cycles):
        for u in sorted(cyc.vertices):
            if yz.y[u] == 0:
                vals = list(x.values)
                _round(G, x, cyc, u, -1, vals)
                hv = _try(G, x, value, vals)
                if hv is not None:
                    return hv
            found = _path_moves(G, x, yz, cyc, idx, u, usable, owner, value, steps, budget)
            if found is not None:
                return found
    return None


def _path_moves(G, x, yz, cyc, idx, u, usable, owner, value, steps, budget):
    path_vertices = {u}
    path: list[int] = []

    def candidate(t, other_cycle):
        vals = list(x.values)
        first = path[0]
        _round(G, x, cyc, u, -1 if x[first] == 0 else 1, vals)
        for e in path:
            vals[e] = ONE - x[e]
        if other_cycle is not None:
            last = path[-1]
            _round(G, x, x.cycles[other_cycle], t, -1 if x[last] == 0 else 1, vals)
        return _try(G, x, value, vals)

    def dfs(cur):
        steps[0] += 1
        if steps[0] > budget:
            return None
        for e in G.incidence[cur]:
            if not usable[e] or (path and x[e] == x[path[-1]]):
                continue
            t = G.other(e, cur)
            if t in path_vertices or owner.get(t) == idx:
                continue
            path.append(e)
            path_vertices.add(t)
            if t in owner:
                hv = candidate(t, owner[t])
            else:
                hv = candidate(t, None) if yz.y[t] == 0 else None
                if hv is None:
                    hv = dfs(t)
            path.pop()
            path_vertices.discard(t)
            if hv is not None:
                return hv
        return None

    return dfs(u)


def _heuristic(G: CapGraph, lp=None) -> tuple[HalfVector, DualCover]:
    lp = lp or solve_fractional(G)
    x, yz = lp.primal, lp.dual
    while x.cycle_count:
        nxt = _improving_move(G, x, yz)
        if nxt is None:
            break
        x = nxt
    return x, yz


# -- exact engine ---------------------------------------------------------

def _completion(G: CapGraph, yz: DualCover, family) -> frozenset | None:
    """Integral part completing the cycle ``family`` inside the optimal face,
    or None.  Degrees are bounded per vertex; the bounded-degree subgraph
    problem is solved as a perfect-on-demand matching in the copy/gadget
    graph, where the weight of an edge counts its endpoints that must be
    covered."""
    half = set().union(*family) if family else set()
    on_cycle = set().union(*(cycle_vertices(G, c) for c in family)) if family else set()
    lo, hi = [], []
    for v, c in enumerate(G.capacities):
        if v in on_cycle:
            lo.append(c - 1)
            hi.append(c - 1)
        elif yz.y[v] > 0:
            lo.append(c)
            hi.append(c)
        else:
            lo.append(0)
            hi.append(c)
    if any(h < 0 for h in hi):
        return None
    must = set()
    H = nx.Graph()
    for v in range(G.n):
        for i in range(hi[v]):
            H.add_node(("v", v, i))
            if i < lo[v]:
                must.add(("v", v, i))
    for e, (u, v) in enumerate(G.edges):
        if e in half or yz.slack(G, e) != 0:
            if yz.z[e] > 0:
                return None
            continue
        a, b = ("a", e), ("b", e)
        must |= {a, b}
        H.add_nodes_from((a, b))
        if yz.z[e] == 0:
            H.add_edge(a, b)
        for i in range(hi[u]):
            H.add_edge(("v", u, i), a)
        for j in range(hi[v]):
            H.add_edge(b, ("v", v, j))
    for p, q in H.edges:
        H[p][q]["weight"] = (p in must) + (q in must)
    mate = nx.max_weight_matching(H)
    if sum(H[p][q]["weight"] for p, q in mate) != len(must):
        return None
    chosen = set()
    for p, q in mate:
        for node, other in ((p, q), (q, p)):
            if node[0] == "a" and other[0] == "v":
                chosen.add(node[1])
    return frozenset(chosen)


def _exact(G: CapGraph, lp, upper: HalfVector) -> HalfVector:
    yz = lp.dual
    allowed = {e for e in range(G.m) if yz.slack(G, e) == 0 and yz.z[e] == 0}
    cycles = [c for c in odd_cycles(G, allowed)
              if all(G.capacities[v] >= 1 for v in cycle_vertices(G, c))]
    for k in range(upper.cycle_count):
        for fam in disjoint_families(G, cycles, k):
            M = _completion(G, yz, fam)
            if M is None:
                continue
            vals = [ZERO] * G.m
            for c in fam:
                for e in c:
                    vals[e] = HALF
            for e in M:
                vals[e] = ONE
            hv = half_vector(G, vals)
            if G.value(vals) != lp.primal_value:
                raise AssertionError("face completion lost weight")
            return hv
    return upper


def min_cycle_optimum(G: CapGraph, mode: str = "heuristic",
                      max_edges: int | None = None) -> CycleOptimum:
    """Basic maximum-weight fractional c-matching with few (``exact``: fewest)
    odd cycles.

    In heuristic mode the flag is ``certified`` only if the count is zero, or
    one while the graph is unstable; otherwise ``uncertified``.
    """
    if mode not in ("heuristic", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        require(G.m, oracle_max_edges() if max_edges is None else max_edges, "exact odd-cycle count")
    lp = solve_fractional(G)
    x, yz = _heuristic(G, lp)
    if mode == "exact":
        x = _exact(G, lp, x)
        flag = "exact"
    elif x.cycle_count == 0 or (x.cycle_count == 1 and max_weight_value(G) < lp.primal_value):
        flag = "certified"
    else:
        flag = "uncertified"
    return CycleOptimum(x, yz, lp.primal_value, x.cycle_count, flag)


def gamma_exact(G: CapGraph, max_edges: int | None = None) -> int:
    return min_cycle_optimum(G, "exact", max_edges).cycle_count


__all__ = [
    "UnitReduction", "Translation", "TranslationError", "CycleOptimum", "ScaleError",
    "to_unit_capacity", "translate_from_unit", "min_cycle_optimum", "gamma_exact",
]
