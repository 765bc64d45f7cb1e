"""Exhaustive ground truth for small instances.

Nothing here calls the simplex solver or the gadget matching engine: integral
optima come from branch and bound over edge subsets, fractional optima from a
min-cost flow on the bipartite double cover, and polytope vertices from exact
rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import lcm

import networkx as nx

from .config import MAX_MATCHING_EDGES, MAX_POLYTOPE_EDGES, oracle_max_edges, require
from .graph import (
    HALF, ONE, ZERO, CapGraph, CMatching, cycle_vertices, disjoint_families, odd_cycles,
)

# -- integral optimum ---------------------------------------------------------


def brute_max_c_matching(G: CapGraph, max_edges: int | None = None) -> tuple[CMatching, Fraction]:
    """Maximum-weight c-matching by include-first branch and bound.

    The first optimum met in include-first order is kept, so ties go to the
    lexicographically largest incidence vector (lowest edge ids included).
    """
    require(G.m, MAX_MATCHING_EDGES if max_edges is None else max_edges, "brute_max_c_matching")
    w = G.weights
    suffix = [ZERO] * (G.m + 1)
    for e in range(G.m - 1, -1, -1):
        suffix[e] = suffix[e + 1] + w[e]
    room = list(G.capacities)
    chosen: list[int] = []
    best = [ZERO, ()]
    first = [True]

    def search(e: int, value: Fraction):
        if e == G.m:
            if first[0] or value > best[0]:
                best[0], best[1] = value, tuple(chosen)
                first[0] = False
            return
        if not first[0] and value + suffix[e] <= best[0]:
            return
        u, v = G.edges[e]
        if room[u] and room[v]:
            room[u] -= 1
            room[v] -= 1
            chosen.append(e)
            search(e + 1, value + w[e])
            chosen.pop()
            room[u] += 1
            room[v] += 1
        search(e + 1, value)

    search(0, ZERO)
    return CMatching(best[1]), best[0]


def brute_matching_value(G: CapGraph, max_edges: int | None = None) -> Fraction:
    return brute_max_c_matching(G, max_edges)[1]


# -- fractional optimum -----------------------------------------------------

def flow_fractional_value(G: CapGraph) -> Fraction:
    """Maximum-weight fractional c-matching value.

    A fractional c-matching ``x`` gives the b-matching ``x`` on both arcs of
    the bipartite double cover, and any b-matching there averages back to a
    fractional c-matching, so the value is half the (integral) bipartite
    optimum, found here by min-cost flow.
    """
    if G.m == 0:
        return ZERO
    den = lcm(*(w.denominator for w in G.weights))
    total = sum(G.capacities)
    D = nx.DiGraph()
    D.add_node("s", demand=-total)
    D.add_node("t", demand=total)
    D.add_edge("s", "t", capacity=total, weight=0)
    for v, c in enumerate(G.capacities):
        D.add_edge("s", ("L", v), capacity=c, weight=0)
        D.add_edge(("R", v), "t", capacity=c, weight=0)
    for (u, v), w in zip(G.edges, G.weights):
        cost = -int(w * den)
        D.add_edge(("L", u), ("R", v), capacity=1, weight=cost)
        D.add_edge(("L", v), ("R", u), capacity=1, weight=cost)
    cost, _ = nx.network_simplex(D)
    return Fraction(-cost, 2 * den)


def brute_is_stable(G: CapGraph, max_edges: int | None = None) -> bool:
    return brute_matching_value(G, max_edges) == flow_fractional_value(G)


# -- basic optima -----------------------------------------------------------

def _matchings_with_target(G, family, target, collect):
    """All c'-matchings completing ``family`` to a basic vector of value
    ``target``; cycle vertices must end up saturated."""
    on_cycle = set()
    half_edges = set()
    for cyc in family:
        half_edges |= cyc
        on_cycle |= cycle_vertices(G, cyc)
    room = [c - (1 if v in on_cycle else 0) for v, c in enumerate(G.capacities)]
    if any(r < 0 for r in room):
        return
    need = target - sum((G.weights[e] for e in half_edges), ZERO) / 2
    free = [e for e in range(G.m) if e not in half_edges]
    suffix = [ZERO] * (len(free) + 1)
    for i in range(len(free) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + G.weights[free[i]]
    left = [0] * G.n  # undecided free edges at each vertex
    for e in free:
        for v in G.edges[e]:
            left[v] += 1
    chosen: list[int] = []

    def search(i, value):
        if value + suffix[i] < need:
            return
        if i == len(free):
            if value == need and all(room[v] == 0 for v in on_cycle):
                collect(half_edges, tuple(chosen))
            return
        e = free[i]
        u, v = G.edges[e]
        left[u] -= 1
        left[v] -= 1
        if room[u] and room[v]:
            room[u] -= 1
            room[v] -= 1
            chosen.append(e)
            search(i + 1, value + G.weights[e])
            chosen.pop()
            room[u] += 1
            room[v] += 1
        if not any(w in on_cycle and room[w] > left[w] for w in (u, v)):
            search(i + 1, value)
        left[u] += 1
        left[v] += 1

    search(0, ZERO)


@dataclass(frozen=True)
class BasicOptima:
    value: Fraction
    optima: tuple[tuple[Fraction, ...], ...]
    gamma: int


def brute_basic_optima(G: CapGraph, max_edges: int | None = None) -> BasicOptima:
    """All basic maximum-weight fractional c-matchings.

    Rather than filtering all of ``{0, 1/2, 1}^E``, vectors are assembled
    from a family of vertex-disjoint odd cycles at 1/2 plus an integral part
    that saturates every cycle vertex; this produces exactly the vectors that
    pass the basic-vector test.  The optimum value comes from the flow oracle.
    """
    require(G.m, oracle_max_edges() if max_edges is None else max_edges, "brute_basic_optima")
    target = flow_fractional_value(G)
    cycles = odd_cycles(G)
    found: list[tuple[Fraction, ...]] = []

    def collect(half_edges, matched):
        x = [ZERO] * G.m
        for e in half_edges:
            x[e] = HALF
        for e in matched:
            x[e] = ONE
        found.append(tuple(x))

    size = 0
    while True:
        families = list(disjoint_families(G, cycles, size))
        if not families:
            break
        for fam in families:
            _matchings_with_target(G, fam, target, collect)
        size += 1
    found.sort()
    gamma = min(_count_cycles(G, x) for x in found)
    return BasicOptima(target, tuple(found), gamma)


def _count_cycles(G: CapGraph, x) -> int:
    half = [e for e, xe in enumerate(x) if xe == HALF]
    H = nx.Graph()
    H.add_edges_from(G.edges[e] for e in half)
    return nx.number_connected_components(H)


def brute_basic_optima_naive(G: CapGraph, max_edges: int = 9) -> BasicOptima:
    """Same as :func:`brute_basic_optima` by filtering every vector of
    ``{0, 1/2, 1}^E``; only for cross-checking on tiny graphs."""
    require(G.m, max_edges, "brute_basic_optima_naive")
    best, keep = None, []
    for x in product((ZERO, HALF, ONE), repeat=G.m):
        if not _feasible(G, x) or not _basic_by_definition(G, x):
            continue
        val = G.value(x)
        if best is None or val > best:
            best, keep = val, [x]
        elif val == best:
            keep.append(x)
    gamma = min(_count_cycles(G, x) for x in keep)
    return BasicOptima(best, tuple(sorted(keep)), gamma)


def _feasible(G, x) -> bool:
    return all(G.load(x, v) <= G.capacities[v] for v in range(G.n))


def _basic_by_definition(G, x) -> bool:
    half = [e for e, xe in enumerate(x) if xe == HALF]
    H = nx.Graph()
    H.add_edges_from(G.edges[e] for e in half)
    if any(d != 2 for _, d in H.degree()):
        return False
    for comp in nx.connected_components(H):
        if H.subgraph(comp).number_of_edges() % 2 == 0:
            return False
        if any(G.load(x, v) != G.capacities[v] for v in comp):
            return False
    return True


def brute_gamma(G: CapGraph, max_edges: int | None = None) -> int:
    return brute_basic_optima(G, max_edges).gamma


# -- minimum stabilizers ----------------------------------------------------

def brute_min_capacity_stabilizer(G: CapGraph, max_edges: int | None = None
                                  ) -> tuple[int, tuple[int, ...]]:
    """Smallest vertex multiset ``S`` (multiplicity at most ``c_v``) such that
    lowering the capacities in ``S`` makes the graph stable."""
    require(G.m, oracle_max_edges() if max_edges is None else max_edges,
            "brute_min_capacity_stabilizer")
    total = sum(G.capacities)
    for k in range(total + 1):
        for S in combinations_with_replacement(range(G.n), k):
            caps = list(G.capacities)
            ok = True
            for v in S:
                caps[v] -= 1
                if caps[v] < 0:
                    ok = False
                    break
            if ok and brute_is_stable(G.with_capacities(caps), G.m):
                return k, S
    raise AssertionError("zero capacities are always stable")


def brute_min_edge_stabilizer(G: CapGraph, weight_preserving: bool = False,
                              max_edges: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Smallest edge set ``F`` with ``G \\ F`` stable (and, if requested, with
    the same maximum c-matching weight as ``G``)."""
    require(G.m, oracle_max_edges() if max_edges is None else max_edges,
            "brute_min_edge_stabilizer")
    before = brute_matching_value(G, G.m)
    for k in range(G.m + 1):
        for F in combinations(range(G.m), k):
            H, _ = G.without_edges(F)
            after = brute_matching_value(H, H.m)
            if weight_preserving and after != before:
                continue
            if after == flow_fractional_value(H):
                return k, F
    raise AssertionError("the empty graph is always stable")


# -- polytope vertices -----------------------------------------------------

def rank(rows: list[list[Fraction]]) -> int:
    """Rank over the rationals by Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncol = len(rows[0])
    r = 0
    for col in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                f = Fraction(f) / p[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class PolytopeVertexGraph:
    vertices: tuple[tuple[Fraction, ...], ...]
    adjacency: tuple[tuple[int, int], ...]

    def neighbours(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.adjacency if i in (a, b)]


def _half_points(G: CapGraph):
    """Feasible points of ``{0, 1/2, 1}^E`` as doubled integer tuples."""
    load = [0] * G.n
    cap2 = [2 * c for c in G.capacities]
    point = [0] * G.m

    def rec(e):
        if e == G.m:
            yield tuple(point)
            return
        u, v = G.edges[e]
        for val in (0, 1, 2):
            if load[u] + val > cap2[u] or load[v] + val > cap2[v]:
                break
            load[u] += val
            load[v] += val
            point[e] = val
            yield from rec(e + 1)
            load[u] -= val
            load[v] -= val
        point[e] = 0

    yield from rec(0)


def _tight_mask(G: CapGraph, x2) -> int:
    """Bits 0..m-1: ``x_e = 0``; m..2m-1: ``x_e = 1``; then saturated vertices."""
    mask = 0
    for e, xe in enumerate(x2):
        if xe == 0:
            mask |= 1 << e
        elif xe == 2:
            mask |= 1 << (G.m + e)
    for v in range(G.n):
        if G.incidence[v] and sum(x2[e] for e in G.incidence[v]) == 2 * G.capacities[v]:
            mask |= 1 << (2 * G.m + v)
    return mask


def _mask_rank(G: CapGraph, mask: int) -> int:
    # A bound row fixes its edge; what remains is the vertex rows on the free edges.
    fixed = {e for e in range(G.m) if mask >> e & 1 or mask >> (G.m + e) & 1}
    free = [e for e in range(G.m) if e not in fixed]
    rows = [[Fraction(1 if e in G.incidence[v] else 0) for e in free]
            for v in range(G.n) if mask >> (2 * G.m + v) & 1]
    return len(fixed) + (rank(rows) if free else 0)


def enumerate_polytope_vertices(G: CapGraph) -> PolytopeVertexGraph:
    """Vertices of the fractional c-matching polytope and its edge graph.

    Candidates are the feasible points of ``{0, 1/2, 1}^E``; a candidate is a
    vertex when its tight constraints have rank ``|E|``, and two vertices are
    adjacent when their common tight constraints have rank ``|E| - 1``.
    """
    require(G.m, MAX_POLYTOPE_EDGES, "enumerate_polytope_vertices")
    cache: dict[int, int] = {}

    def mask_rank(mask):
        if mask not in cache:
            cache[mask] = _mask_rank(G, mask)
        return cache[mask]

    verts, masks = [], []
    for x2 in _half_points(G):
        mask = _tight_mask(G, x2)
        if mask.bit_count() >= G.m and mask_rank(mask) == G.m:
            verts.append(tuple(Fraction(a, 2) for a in x2))
            masks.append(mask)
    adjacency = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            common = masks[i] & masks[j]
            if common.bit_count() >= G.m - 1 and mask_rank(common) == G.m - 1:
                adjacency.append((i, j))
    return PolytopeVertexGraph(tuple(verts), tuple(adjacency))
