"""Stability decisions and stabilizers.

A graph is stable when its maximum c-matching weight equals the fractional
optimum.  Lowering the capacity of one vertex per half-valued odd cycle (the
one with the smallest dual potential) stabilizes a graph with the fewest
possible capacity reductions; deleting the non-matched edges at those
vertices gives an edge stabilizer within a factor of the maximum degree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil

from .config import oracle_max_edges
from .gamma import min_cycle_optimum
from .graph import ONE, ZERO, CapGraph, CMatching, WalkRecord, indicator
from .lp import (
    DualCover, HalfVector, LpResult, check_complementary_slackness, check_dual, check_primal,
    solve_fractional,
)
from .matching import _blossom, alternate_round, find_feasible_augmenting_walk


class StabilizerError(ValueError):
    """A proposed stabilizer is invalid or does not stabilize."""


@dataclass(frozen=True)
class Certificate:
    """Integral matching and dual cover of equal value satisfying slackness."""

    matching: CMatching
    dual: DualCover

    def check(self, G: CapGraph) -> list[str]:
        x = indicator(G, self.matching)
        problems = check_primal(G, x) + check_dual(G, self.dual)
        if problems:
            return problems
        ok, violations = check_complementary_slackness(G, x, self.dual)
        problems = [f"{v.clause} at {v.kind} {v.index}: {v.detail}" for v in violations]
        if G.weight_of(self.matching) != self.dual.value(G):
            problems.append("matching weight differs from cover value")
        return problems


@dataclass(frozen=True)
class StabilityCheck:
    stable: bool
    matching: CMatching
    value: Fraction
    fractional: LpResult
    certificate: Certificate | None   # when stable
    walk: WalkRecord | None           # when unstable

    @property
    def fractional_value(self) -> Fraction:
        return self.fractional.primal_value


def is_stable(G: CapGraph) -> StabilityCheck:
    """Decide stability.  A stable answer carries a matching and cover of
    equal value; an unstable one carries the better fractional optimum and a
    feasible augmenting walk for the maximum matching."""
    M = _blossom(G)
    value = G.weight_of(M)
    lp = solve_fractional(G)
    if value == lp.primal_value:
        cert = Certificate(M, lp.dual)
        problems = cert.check(G)
        if problems:
            raise AssertionError("stability certificate failed: " + "; ".join(problems))
        return StabilityCheck(True, M, value, lp, cert, None)
    if value > lp.primal_value:
        raise AssertionError("integral optimum exceeds the fractional optimum")
    walk = find_feasible_augmenting_walk(G, M)
    if walk is None:
        raise AssertionError("unstable graph without an augmenting walk")
    return StabilityCheck(False, M, value, lp, None, walk)


def stable(G: CapGraph) -> bool:
    return G.weight_of(_blossom(G)) == solve_fractional(G).primal_value


# -- applying stabilizers -----------------------------------------------------

def apply_stabilizer(G: CapGraph, solution, kind: str = "capacity") -> CapGraph:
    """``G[c_S - 1]`` for a vertex multiset, or ``G \\ F`` for an edge set."""
    if kind == "capacity":
        caps = list(G.capacities)
        for v in solution:
            G.check_vertex(v)
            caps[v] -= 1
            if caps[v] < 0:
                raise StabilizerError(f"capacity of vertex {G.labels[v]} would drop below zero")
        return G.with_capacities(caps)
    if kind == "edge":
        return G.without_edges(solution)[0]
    raise ValueError(f"unknown stabilizer kind {kind!r}")


# -- stabilizer reports ---------------------------------------------------

@dataclass(frozen=True)
class StabReport:
    kind: str                      # "capacity" | "edge"
    solution: tuple[int, ...]      # vertex ids (capacity) or edge ids (edge)
    lower_bound: int
    stabilized: CapGraph
    kept_edges: tuple[int, ...]    # original id of each edge of ``stabilized``
    certificate: Certificate       # on ``stabilized``
    weight_before: Fraction
    weight_after: Fraction
    cycle_count: int
    optimality: str                # "exact" | "certified" | "uncertified"
    fractional: HalfVector         # optimum used to choose the solution
    dual: DualCover                # its optimal dual

    @property
    def size(self) -> int:
        return len(self.solution)


def _gamma_data(G: CapGraph, mode: str):
    if mode == "auto":
        mode = "exact" if G.m <= oracle_max_edges() else "heuristic"
    return min_cycle_optimum(G, mode)


def _lower_bounds(G: CapGraph, count: int, flag: str, unstable: bool) -> tuple[int, int]:
    gamma = count if flag in ("exact", "certified") else int(unstable)
    edge = gamma if G.unit_weight else ceil(gamma / 2)
    return gamma, edge


def lower_bounds(G: CapGraph, mode: str = "auto") -> tuple[int, int]:
    """(capacity bound, edge bound): gamma and ceil(gamma/2), the latter
    raised to gamma when every weight is one.  If gamma is not certified the
    bounds fall back to 1 for unstable and 0 for stable graphs."""
    opt = _gamma_data(G, mode)
    return _lower_bounds(G, opt.cycle_count, opt.flag, opt.value != G.weight_of(_blossom(G)))


def _chosen_vertices(x: HalfVector, yz: DualCover) -> list[int]:
    return [min(c.vertices, key=lambda v: (yz.y[v], v)) for c in x.cycles]


def _rounded(G: CapGraph, x: HalfVector, S) -> tuple:
    for cyc, v in zip(list(x.cycles), S):
        target = next(c for c in x.cycles if set(c.edges) == set(cyc.edges))
        x = alternate_round(G, x, target, v, "exposing")
    return x.values


def capacity_stabilizer(G: CapGraph, mode: str = "auto") -> StabReport:
    """Lower by one the capacity of the minimum-potential vertex of every odd
    cycle of an optimum with few cycles (lowest id on ties).

    With ``mode="exact"`` (default for small graphs via ``auto``) the solution
    is a minimum capacity stabilizer.  The certificate rounds every cycle so
    that its chosen vertex is exposed and reuses the optimal dual unchanged.
    """
    opt = _gamma_data(G, mode)
    x, yz = opt.x, opt.dual
    S = _chosen_vertices(x, yz)
    H = apply_stabilizer(G, S, "capacity")
    xr = _rounded(G, x, S)
    M = CMatching(e for e, v in enumerate(xr) if v == ONE)
    cert = Certificate(M, yz)
    problems = cert.check(H)
    if problems:
        raise AssertionError("capacity certificate failed: " + "; ".join(problems))
    before = G.weight_of(_blossom(G))
    after = H.weight_of(M)
    lb, _ = _lower_bounds(G, opt.cycle_count, opt.flag, before != opt.value)
    return StabReport("capacity", tuple(S), lb, H, tuple(range(G.m)), cert, before, after,
                      opt.cycle_count, opt.flag, x, yz)


def edge_stabilizer_approx(G: CapGraph, mode: str = "auto") -> StabReport:
    """Delete, at every vertex chosen by :func:`capacity_stabilizer`, all
    incident edges not at value one in the optimum.

    The certificate keeps the rounded matching; the cover drops the potential
    of each chosen vertex and moves it onto the remaining (matched) edges.
    """
    opt = _gamma_data(G, mode)
    x, yz = opt.x, opt.dual
    S = _chosen_vertices(x, yz)
    F = sorted({e for v in S for e in G.incidence[v] if e not in x.matched})
    H, kept = G.without_edges(F)
    xr = _rounded(G, x, S)
    Sset = set(S)
    y = tuple(ZERO if v in Sset else yz.y[v] for v in range(G.n))
    z = []
    for e in kept:
        extra = sum((yz.y[u] for u in G.edges[e] if u in Sset), ZERO)
        z.append(yz.z[e] + extra)
    M = CMatching(i for i, e in enumerate(kept) if xr[e] == ONE)
    cert = Certificate(M, DualCover(y, tuple(z)))
    problems = cert.check(H)
    if problems:
        raise AssertionError("edge certificate failed: " + "; ".join(problems))
    before = G.weight_of(_blossom(G))
    _, lb = _lower_bounds(G, opt.cycle_count, opt.flag, before != opt.value)
    return StabReport("edge", tuple(F), lb, H, kept, cert, before, H.weight_of(M),
                      opt.cycle_count, opt.flag, x, yz)


# -- minimality -------------------------------------------------------------

def _sub_multisets(items: tuple[int, ...]):
    """Proper sub-multisets of a sorted tuple, largest first, each once."""
    seen = set()
    for k in range(len(items) - 1, -1, -1):
        for sub in combinations(items, k):
            if sub not in seen:
                seen.add(sub)
                yield sub


def minimalize_stabilizer(G: CapGraph, solution, kind: str = "capacity",
                          exhaustive_limit: int = 12) -> tuple[int, ...]:
    """Drop elements while the graph stays stable, trying the highest id
    first so that low ids survive, then
    confirm no proper subset stabilizes (descending into one if it does).

    The confirmation is exhaustive for solutions up to ``exhaustive_limit``
    elements; larger ones are only greedily minimal.
    """
    current = tuple(sorted(solution))
    if kind not in ("capacity", "edge"):
        raise ValueError(f"unknown stabilizer kind {kind!r}")
    if kind == "edge" and len(set(current)) != len(current):
        raise StabilizerError("edge stabilizer lists an edge twice")
    if not stable(apply_stabilizer(G, current, kind)):
        raise StabilizerError("input does not stabilize the graph")
    while True:
        for i in range(len(current) - 1, -1, -1):
            trial = current[:i] + current[i + 1:]
            if stable(apply_stabilizer(G, trial, kind)):
                current = trial
        if len(current) > exhaustive_limit:
            return current
        smaller = next((s for s in _sub_multisets(current)
                        if stable(apply_stabilizer(G, s, kind))), None)
        if smaller is None:
            return current
        current = smaller


def is_multiset_of(sub, sup) -> bool:
    a, b = Counter(sub), Counter(sup)
    return all(b[k] >= n for k, n in a.items())
