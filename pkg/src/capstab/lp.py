"""Exact LP for maximum-weight fractional c-matchings and its dual.

Primal::

    max  w.x   s.t.  x(delta(v)) <= c_v,  0 <= x_e <= 1

Dual::

    min  c.y + 1.z   s.t.  y_u + y_v + z_uv >= w_uv,  y, z >= 0

The solver is a bounded-variable primal simplex over :class:`Fraction`.  Only
the vertex rows are explicit; ``x_e <= 1`` is handled as a variable bound, so
every basic solution the simplex visits is a vertex of the polytope.
Entering and leaving variables follow Bland's lowest-index rule, which makes
the result deterministic and prevents cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .graph import HALF, ONE, ZERO, CapGraph, GraphError, indicator


class InfeasibleError(ValueError):
    """An edge vector or dual pair violates its own feasibility constraints."""


class NotBasicError(ValueError):
    """An edge vector is not a vertex of the fractional c-matching polytope."""


class OddCycle(NamedTuple):
    """Closed cycle; ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``
    (indices mod length).  Canonical form starts at the smallest vertex and
    leaves it along the smaller of its two cycle edges."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class DualCover:
    y: tuple[Fraction, ...]
    z: tuple[Fraction, ...]

    def value(self, G: CapGraph) -> Fraction:
        return sum((c * yv for c, yv in zip(G.capacities, self.y)), ZERO) + sum(self.z, ZERO)

    def slack(self, G: CapGraph, e: int) -> Fraction:
        u, v = G.edges[e]
        return self.y[u] + self.y[v] + self.z[e] - G.weights[e]


@dataclass(frozen=True)
class HalfVector:
    """Basic fractional c-matching together with its support decomposition."""

    values: tuple[Fraction, ...]
    cycles: tuple[OddCycle, ...] = field(compare=False)
    matched: frozenset = field(compare=False)

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    def __getitem__(self, e):
        return self.values[e]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class LpResult:
    primal: HalfVector
    dual: DualCover
    primal_value: Fraction
    dual_value: Fraction


class Violation(NamedTuple):
    clause: str  # "edge-tight" | "vertex-saturated" | "edge-at-one"
    kind: str    # "edge" | "vertex"
    index: int
    detail: str


# -- feasibility and structure ----------------------------------------------

def _doubled(x) -> list[int] | None:
    """``2x`` as integers when every entry is a half-integer in [0, 1]."""
    out = []
    for xe in x:
        d = xe * 2
        if getattr(d, "denominator", None) != 1 or not 0 <= d <= 2:
            return None
        out.append(int(d))
    return out


def check_primal(G: CapGraph, x: Sequence[Fraction]) -> list[str]:
    problems = []
    if len(x) != G.m:
        return [f"vector has {len(x)} entries for {G.m} edges"]
    x2 = _doubled(x)
    if x2 is not None:
        # integer fast path; fall through to the exact messages on failure
        if all(sum(x2[e] for e in G.incidence[v]) <= 2 * G.capacities[v] for v in range(G.n)):
            return []
    for e, xe in enumerate(x):
        if xe < 0 or xe > 1:
            problems.append(f"edge {G.edge_label(e)}: x={xe} outside [0,1]")
    for v in range(G.n):
        load = G.load(x, v)
        if load > G.capacities[v]:
            problems.append(f"vertex {G.labels[v]}: load {load} exceeds capacity {G.capacities[v]}")
    return problems


def check_dual(G: CapGraph, yz: DualCover) -> list[str]:
    problems = []
    if len(yz.y) != G.n or len(yz.z) != G.m:
        return ["dual vector lengths do not match the graph"]
    for v, yv in enumerate(yz.y):
        if yv < 0:
            problems.append(f"vertex {G.labels[v]}: y={yv} negative")
    for e, ze in enumerate(yz.z):
        if ze < 0:
            problems.append(f"edge {G.edge_label(e)}: z={ze} negative")
        if yz.slack(G, e) < 0:
            problems.append(f"edge {G.edge_label(e)}: cover short by {-yz.slack(G, e)}")
    return problems


def _half_components(G: CapGraph, half: list[int]):
    adj: dict[int, list[int]] = {}
    for e in half:
        u, v = G.edges[e]
        adj.setdefault(u, []).append(e)
        adj.setdefault(v, []).append(e)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, verts, edges = [start], set(), set()
        while stack:
            u = stack.pop()
            if u in verts:
                continue
            verts.add(u)
            for e in adj[u]:
                edges.add(e)
                stack.append(G.other(e, u))
        seen |= verts
        comps.append((verts, edges, adj))
    return comps


def _trace_cycle(G: CapGraph, verts, adj) -> OddCycle:
    start = min(verts)
    first = min(adj[start])
    vs, es = [start], [first]
    prev_edge, cur = first, G.other(first, start)
    while cur != start:
        vs.append(cur)
        nxt = adj[cur][0] if adj[cur][1] == prev_edge else adj[cur][1]
        es.append(nxt)
        prev_edge, cur = nxt, G.other(nxt, cur)
    return OddCycle(tuple(vs), tuple(es))


def _basic_structure(G: CapGraph, x: Sequence[Fraction]):
    """Return (cycles, matched) or a string explaining why x is not basic."""
    half, matched = [], set()
    for e, xe in enumerate(x):
        if xe == HALF:
            half.append(e)
        elif xe == ONE:
            matched.add(e)
        elif xe != ZERO:
            return f"edge {G.edge_label(e)} has non-half-integral value {xe}"
    cycles = []
    for verts, edges, adj in _half_components(G, half):
        if any(len(adj[v]) != 2 for v in verts):
            return "half-valued edges do not form disjoint cycles"
        if len(edges) % 2 == 0:
            return f"half-valued even cycle through vertex {G.labels[min(verts)]}"
        for v in verts:
            if sum(x[e] for e in G.incidence[v]) != G.capacities[v]:
                return f"cycle vertex {G.labels[v]} is not saturated"
        cycles.append(_trace_cycle(G, verts, adj))
    cycles.sort(key=lambda c: c.vertices[0])
    return tuple(cycles), frozenset(matched)


def is_basic(G: CapGraph, x: Sequence[Fraction]) -> bool:
    """Whether feasible ``x`` is a vertex of the fractional c-matching polytope."""
    problems = check_primal(G, x)
    if problems:
        raise InfeasibleError("; ".join(problems))
    return not isinstance(_basic_structure(G, x), str)


def decompose_support(G: CapGraph, x) -> tuple[tuple[OddCycle, ...], frozenset]:
    """Fractional odd cycles and the set of edges at value one."""
    if isinstance(x, HalfVector):
        return x.cycles, x.matched
    problems = check_primal(G, x)
    if problems:
        raise InfeasibleError("; ".join(problems))
    structure = _basic_structure(G, x)
    if isinstance(structure, str):
        raise NotBasicError(structure)
    return structure


def half_vector(G: CapGraph, x: Sequence[Fraction]) -> HalfVector:
    cycles, matched = decompose_support(G, tuple(x))
    return HalfVector(tuple(x), cycles, matched)


def check_complementary_slackness(G: CapGraph, x: Sequence[Fraction],
                                  yz: DualCover) -> tuple[bool, list[Violation]]:
    """Check the three slackness clauses.

    Infeasible inputs raise :class:`InfeasibleError`; slackness failures are
    returned as violations.
    """
    problems = check_primal(G, x) + check_dual(G, yz)
    if problems:
        raise InfeasibleError("; ".join(problems))
    out = []
    for e in range(G.m):
        if x[e] != 0 and yz.slack(G, e) != 0:
            out.append(Violation("edge-tight", "edge", e,
                                 f"x={x[e]} but cover exceeds w by {yz.slack(G, e)}"))
    for v in range(G.n):
        if yz.y[v] != 0 and G.load(x, v) != G.capacities[v]:
            out.append(Violation("vertex-saturated", "vertex", v,
                                 f"y={yz.y[v]} but load {G.load(x, v)} < {G.capacities[v]}"))
    for e in range(G.m):
        if yz.z[e] != 0 and x[e] != 1:
            out.append(Violation("edge-at-one", "edge", e, f"z={yz.z[e]} but x={x[e]}"))
    return not out, out


# -- simplex ------------------------------------------------------------------

class _Simplex:
    """Bounded-variable tableau.  Columns ``0..m-1`` are edges (bounded by 1),
    columns ``m..m+n-1`` are vertex slacks (unbounded above)."""

    def __init__(self, G: CapGraph, start: frozenset = frozenset()):
        self.G = G
        m, n = G.m, G.n
        self.m, self.n = m, n
        ncol = m + n
        self.cost = list(G.weights) + [ZERO] * n
        self.rows = []
        for v in range(n):
            row = [ZERO] * ncol
            for e in G.incidence[v]:
                row[e] = ONE
            row[m + v] = ONE
            self.rows.append(row)
        self.basis = [m + v for v in range(n)]
        self.at_upper = set(start)
        self.beta = [Fraction(G.capacities[v]) - sum(1 for e in G.incidence[v] if e in start)
                     for v in range(n)]
        if any(b < 0 for b in self.beta):
            raise InfeasibleError("warm start is not a c-matching")
        self.reduced = self.cost[:]  # slack basis has zero cost

    def upper(self, j):
        return ONE if j < self.m else None

    def x(self) -> tuple[Fraction, ...]:
        vals = [ONE if e in self.at_upper else ZERO for e in range(self.m)]
        for i, j in enumerate(self.basis):
            if j < self.m:
                vals[j] = self.beta[i]
        return tuple(vals)

    def entering(self):
        basic = set(self.basis)
        for j, d in enumerate(self.reduced):
            if j in basic:
                continue
            if (d > 0 and j not in self.at_upper) or (d < 0 and j in self.at_upper):
                return j
        return None

    def step(self) -> bool:
        """One pivot or bound flip; False once optimal."""
        q = self.entering()
        if q is None:
            return False
        direction = -1 if q in self.at_upper else 1
        best, leave = self.upper(q), None  # flip candidate
        for i, row in enumerate(self.rows):
            a = row[q] * direction
            if a > 0:
                t = self.beta[i] / a
            elif a < 0 and self.upper(self.basis[i]) is not None:
                t = (self.upper(self.basis[i]) - self.beta[i]) / -a
            else:
                continue
            if best is None or t < best or (t == best and leave is not None
                                            and self.basis[i] < self.basis[leave]):
                best, leave = t, i
        if best is None:
            raise ArithmeticError("unbounded direction in a bounded polytope")
        t = best
        for i, row in enumerate(self.rows):
            if row[q]:
                self.beta[i] -= row[q] * direction * t
        if leave is None:
            self.at_upper ^= {q}
            return True
        r = leave
        out = self.basis[r]
        a = self.rows[r][q] * direction
        if a < 0:
            self.at_upper.add(out)
        start = ONE if q in self.at_upper else ZERO
        self.at_upper.discard(q)
        self._pivot(r, q)
        self.beta[r] = start + direction * t
        return True

    def _pivot(self, r, q):
        prow = self.rows[r]
        piv = prow[q]
        if piv != 1:
            prow = [a / piv for a in prow]
            self.rows[r] = prow
        nz = [(j, a) for j, a in enumerate(prow) if a]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[q]
            if f:
                for j, a in nz:
                    row[j] -= f * a
        f = self.reduced[q]
        if f:
            for j, a in nz:
                self.reduced[j] -= f * a
        self.basis[r] = q

    def run(self):
        while self.step():
            pass

    def dual(self) -> DualCover:
        y = tuple(-self.reduced[self.m + v] for v in range(self.n))
        z = tuple(max(ZERO, self.reduced[e]) for e in range(self.m))
        return DualCover(y, z)


def _shift_edge_duals(G: CapGraph, yz: DualCover) -> DualCover:
    """Move ``z_e`` onto an endpoint of capacity one where that costs nothing.

    If ``z_e > 0`` then ``x_e = 1`` in the optimum, so a capacity-one endpoint
    carries no other positive edge and may absorb ``z_e`` into ``y`` without
    changing the objective or breaking slackness.  Vertex potentials are the
    more informative dual for stabilization, hence the preference.
    """
    y, z = list(yz.y), list(yz.z)
    for e in range(G.m):
        if z[e] > 0:
            for u in sorted(G.edges[e]):
                if G.capacities[u] == 1:
                    y[u] += z[e]
                    z[e] = ZERO
                    break
    return DualCover(tuple(y), tuple(z))


def solve_fractional(G: CapGraph) -> LpResult:
    """Basic maximum-weight fractional c-matching with an optimal dual."""
    s = _Simplex(G)
    s.run()
    x = s.x()
    yz = _shift_edge_duals(G, s.dual())
    structure = _basic_structure(G, x)
    if isinstance(structure, str):
        raise AssertionError(f"simplex returned a non-vertex: {structure}")
    if check_primal(G, x) or check_dual(G, yz):
        raise AssertionError("simplex returned an infeasible pair")
    ok, violations = check_complementary_slackness(G, x, yz)
    pv, dv = G.value(x), yz.value(G)
    if not ok or pv != dv:
        raise AssertionError(f"optimality certificate failed: {violations}, {pv} vs {dv}")
    cycles, matched = structure
    return LpResult(HalfVector(x, cycles, matched), yz, pv, dv)


def fractional_value(G: CapGraph) -> Fraction:
    return solve_fractional(G).primal_value


def first_improving_vertex(G: CapGraph, M: frozenset):
    """Warm-start the simplex at the indicator of ``M`` and return the first
    vertex it reaches that differs from it (an adjacent, strictly better
    vertex), or ``None`` if ``M`` is already LP-optimal."""
    G.check_edges(M)
    s = _Simplex(G, frozenset(M))
    origin = indicator(G, M)
    while s.step():
        x = s.x()
        if x != origin:
            return x
    return None


__all__ = [
    "DualCover", "HalfVector", "LpResult", "OddCycle", "Violation", "InfeasibleError",
    "NotBasicError", "GraphError", "solve_fractional", "fractional_value", "is_basic",
    "decompose_support", "half_vector", "check_complementary_slackness", "check_primal",
    "check_dual", "first_improving_vertex",
]
