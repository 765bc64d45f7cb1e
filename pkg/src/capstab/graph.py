"""Capacitated graphs, c-matchings and alternating walks.

Vertices and edges are addressed by dense integer ids.  Vertex ids follow the
order in which vertices were declared; edge ids follow the order in which
edges were declared.  Every weight is held as a :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

CMatching = frozenset  # frozenset[int] of edge ids

ZERO = Fraction(0)
HALF = Fraction(1, 2)
ONE = Fraction(1)


class GraphError(ValueError):
    """Raised for malformed graphs or references to unknown vertices/edges."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise GraphError(f"floating point weight {value!r} not allowed; use int or 'p/q'")
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class CapGraph:
    """Simple undirected graph with non-negative rational edge weights and
    non-negative integer vertex capacities."""

    labels: tuple[str, ...]
    capacities: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]
    incidence: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.capacities) != n:
            raise GraphError("one capacity per vertex required")
        if len(self.weights) != len(self.edges):
            raise GraphError("one weight per edge required")
        if len(set(self.labels)) != n:
            raise GraphError("duplicate vertex label")
        for c in self.capacities:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise GraphError(f"capacity must be a non-negative integer, got {c!r}")
        inc: list[list[int]] = [[] for _ in range(n)]
        index = {}
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {e} references unknown vertex")
            if u == v:
                raise GraphError(f"edge {e} is a self-loop at {self.labels[u]}")
            key = (min(u, v), max(u, v))
            if key in index:
                raise GraphError(f"edges {index[key]} and {e} are parallel")
            index[key] = e
            inc[u].append(e)
            inc[v].append(e)
        for e, w in enumerate(self.weights):
            if not isinstance(w, Fraction):
                raise GraphError(f"weight of edge {e} must be a Fraction")
            if w < 0:
                raise GraphError(f"edge {e} has negative weight {w}")
        object.__setattr__(self, "incidence", tuple(tuple(i) for i in inc))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_hash",
                           hash((self.labels, self.capacities, self.edges, self.weights)))

    @classmethod
    def build(cls, vertices, edges) -> "CapGraph":
        """Build from ``[(label, cap), ...]`` and ``[(label_u, label_v, w), ...]``."""
        labels = tuple(str(lab) for lab, _ in vertices)
        caps = tuple(int(c) for _, c in vertices)
        pos = {lab: i for i, lab in enumerate(labels)}
        ends, weights = [], []
        for u, v, w in edges:
            try:
                ends.append((pos[str(u)], pos[str(v)]))
            except KeyError as exc:
                raise GraphError(f"unknown vertex {exc.args[0]!r}") from None
            weights.append(as_fraction(w))
        return cls(labels, caps, tuple(ends), tuple(weights))

    @classmethod
    def from_edges(cls, n: int, edges, capacities=None, weights=None) -> "CapGraph":
        """Convenience constructor on vertices ``0..n-1`` (labels ``"0"``..)."""
        caps = tuple(capacities) if capacities is not None else (1,) * n
        ws = tuple(as_fraction(w) for w in weights) if weights is not None else (ONE,) * len(edges)
        return cls(tuple(str(i) for i in range(n)), caps, tuple(tuple(e) for e in edges), ws)

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(i) for i in self.incidence), default=0)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, ZERO)

    @property
    def unit_weight(self) -> bool:
        return all(w == 1 for w in self.weights)

    def vertex(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise GraphError(f"unknown vertex {label!r}") from None

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f"no edge between {u} and {v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise GraphError(f"unknown vertex id {v!r}")

    def check_edges(self, edges: Iterable[int]) -> None:
        for e in edges:
            if not (isinstance(e, int) and 0 <= e < self.m):
                raise GraphError(f"unknown edge id {e!r}")

    def weight_of(self, edges: Iterable[int]) -> Fraction:
        return sum((self.weights[e] for e in edges), ZERO)

    def load(self, x: Sequence[Fraction], v: int) -> Fraction:
        """x(delta(v))."""
        return sum((x[e] for e in self.incidence[v]), ZERO)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((w * xe for w, xe in zip(self.weights, x) if xe), ZERO)

    def edge_label(self, e: int) -> str:
        u, v = self.edges[e]
        return f"{self.labels[u]}-{self.labels[v]}"

    # -- derived graphs ----------------------------------------------------

    def with_capacities(self, capacities: Sequence[int]) -> "CapGraph":
        return CapGraph(self.labels, tuple(capacities), self.edges, self.weights)

    def with_weights(self, weights: Sequence) -> "CapGraph":
        return CapGraph(self.labels, self.capacities, self.edges,
                        tuple(as_fraction(w) for w in weights))

    def without_edges(self, removed: Iterable[int]) -> tuple["CapGraph", tuple[int, ...]]:
        """Return ``(G \\ F, kept)`` where ``kept[i]`` is the old id of new edge ``i``."""
        removed = set(removed)
        self.check_edges(removed)
        kept = tuple(e for e in range(self.m) if e not in removed)
        g = CapGraph(self.labels, self.capacities,
                     tuple(self.edges[e] for e in kept),
                     tuple(self.weights[e] for e in kept))
        return g, kept

    def __eq__(self, other):
        if not isinstance(other, CapGraph):
            return NotImplemented
        return (self.labels, self.capacities, self.edges, self.weights) == (
            other.labels, other.capacities, other.edges, other.weights)

    def __hash__(self):
        return self._hash


# -- c-matchings -------------------------------------------------------------

def degree_in_matching(G: CapGraph, M: Iterable[int], v: int) -> int:
    """d_v^M, the number of edges of ``M`` at ``v``."""
    G.check_vertex(v)
    M = set(M)
    return sum(1 for e in G.incidence[v] if e in M)


def validate_c_matching(G: CapGraph, M: Iterable[int]) -> bool:
    M = set(M)
    G.check_edges(M)
    deg = [0] * G.n
    for e in M:
        u, v = G.edges[e]
        deg[u] += 1
        deg[v] += 1
    return all(d <= c for d, c in zip(deg, G.capacities))


def matching_degrees(G: CapGraph, M: Iterable[int]) -> list[int]:
    deg = [0] * G.n
    for e in M:
        u, v = G.edges[e]
        deg[u] += 1
        deg[v] += 1
    return deg


def indicator(G: CapGraph, M: Iterable[int]) -> tuple[Fraction, ...]:
    M = set(M)
    return tuple(ONE if e in M else ZERO for e in range(G.m))


def is_fractional_c_matching(G: CapGraph, x: Sequence[Fraction]) -> bool:
    if len(x) != G.m or any(xe < 0 or xe > 1 for xe in x):
        return False
    return all(G.load(x, v) <= G.capacities[v] for v in range(G.n))


# -- walks -------------------------------------------------------------------

@dataclass(frozen=True)
class WalkRecord:
    """A walk ``(start; e_1, ..., e_k; end)`` given by its edge sequence."""

    start: int
    steps: tuple[int, ...]
    end: int

    @property
    def closed(self) -> bool:
        return self.start == self.end

    def __len__(self) -> int:
        return len(self.steps)

    def kappa(self) -> Counter:
        return Counter(self.steps)

    def is_trail(self) -> bool:
        return len(set(self.steps)) == len(self.steps)

    def vertices(self, G: CapGraph) -> list[int]:
        seq = [self.start]
        for e in self.steps:
            seq.append(G.other(e, seq[-1]))
        return seq

    def describe(self, G: CapGraph) -> str:
        names = [G.labels[v] for v in self.vertices(G)]
        return "(" + ", ".join(names) + ")"


def make_walk(G: CapGraph, start: int, steps: Sequence[int]) -> WalkRecord:
    """Trace ``steps`` from ``start``; raises if consecutive edges do not meet."""
    G.check_vertex(start)
    G.check_edges(steps)
    cur = start
    for i, e in enumerate(steps):
        try:
            cur = G.other(e, cur)
        except GraphError:
            raise GraphError(f"step {i} (edge {e}) does not continue the walk at vertex {cur}") from None
    return WalkRecord(start, tuple(steps), cur)


def walk_from_vertices(G: CapGraph, vertices: Sequence[int]) -> WalkRecord:
    steps = [G.edge_id(a, b) for a, b in zip(vertices, vertices[1:])]
    return make_walk(G, vertices[0], steps)


def _check_walk(G: CapGraph, W: WalkRecord) -> None:
    traced = make_walk(G, W.start, W.steps)
    if traced.end != W.end:
        raise GraphError(f"walk ends at {traced.end}, not at declared end {W.end}")


class WalkFlags(NamedTuple):
    alternating: bool
    augmenting: bool
    proper: bool
    feasible: bool


def _endpoint_conditions(G: CapGraph, M: frozenset, W: WalkRecord) -> tuple[bool, bool]:
    """(proper-endpoints, feasible-endpoints) from the closed-form rules for
    an M-alternating walk; repetition of edges is not considered here."""
    if not W.steps:
        return True, True
    first, last = W.steps[0], W.steps[-1]
    deg = lambda v: degree_in_matching(G, M, v)  # noqa: E731
    if not W.closed:
        ok = ((first in M or deg(W.start) <= G.capacities[W.start] - 1)
              and (last in M or deg(W.end) <= G.capacities[W.end] - 1))
        return ok, ok
    if len(W) % 2 == 0:
        return True, True
    v = W.start
    both_in = first in M and last in M
    return (both_in or deg(v) <= G.capacities[v] - 2,
            both_in or deg(v) <= G.capacities[v] - 1)


def is_alternating(M: frozenset, W: WalkRecord) -> bool:
    return all((a in M) != (b in M) for a, b in zip(W.steps, W.steps[1:]))


def walk_gain(G: CapGraph, M: frozenset, W: WalkRecord) -> Fraction:
    """w(W \\ M) - w(W ∩ M), counting repeated edges with multiplicity."""
    return sum((G.weights[e] if e not in M else -G.weights[e] for e in W.steps), ZERO)


def classify_walk(G: CapGraph, M: Iterable[int], W: WalkRecord) -> WalkFlags:
    """Alternating / augmenting / proper / feasible flags of ``W`` w.r.t. ``M``.

    Proper requires ``W`` to be a trail: symmetric difference is taken with
    multiplicity, so a repeated edge can never yield a 0/1 vector.
    """
    M = frozenset(M)
    _check_walk(G, W)
    alternating = is_alternating(M, W)
    if not alternating:
        return WalkFlags(False, False, False, False)
    augmenting = walk_gain(G, M, W) > 0
    proper_ends, feasible_ends = _endpoint_conditions(G, M, W)
    proper = proper_ends and W.is_trail()
    if proper != _proper_direct(G, M, W) or feasible_ends != _feasible_direct(G, M, W):
        raise AssertionError("endpoint rules disagree with direct construction")
    return WalkFlags(True, augmenting, proper, feasible_ends)


def _proper_direct(G: CapGraph, M: frozenset, W: WalkRecord) -> bool:
    x = _augmented(G, M, W, ONE)
    return all(xe in (ZERO, ONE) for xe in x) and is_fractional_c_matching(G, x)


def _feasible_direct(G: CapGraph, M: frozenset, W: WalkRecord) -> bool:
    if not W.steps:
        return True
    return is_fractional_c_matching(G, _augmented(G, M, W, Fraction(1, 2 * len(W))))


def _augmented(G, M, W, eps):
    k = W.kappa()
    return tuple(ONE - k[e] * eps if e in M else k[e] * eps for e in range(G.m))


def epsilon_augmentation(G: CapGraph, M: Iterable[int], W: WalkRecord,
                         eps) -> tuple[Fraction, ...]:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    M = frozenset(M)
    _check_walk(G, W)
    if not is_alternating(M, W):
        raise ValueError("walk is not M-alternating")
    return _augmented(G, M, W, eps)


def apply_walk(G: CapGraph, M: Iterable[int], W: WalkRecord) -> CMatching:
    """``W △ M`` for a proper walk."""
    M = frozenset(M)
    if not classify_walk(G, M, W).proper:
        raise ValueError("walk is not proper for this matching")
    return CMatching(M.symmetric_difference(W.steps))


# -- odd cycles --------------------------------------------------------------

def odd_cycles(G: CapGraph, allowed=None) -> list[frozenset]:
    """Edge sets of all simple odd cycles, optionally within ``allowed`` edges."""
    H = nx.Graph()
    for e, (u, v) in enumerate(G.edges):
        if allowed is None or e in allowed:
            H.add_edge(u, v, id=e)
    out = set()
    for cyc in nx.simple_cycles(H):
        if len(cyc) % 2 == 1 and len(cyc) >= 3:
            out.add(frozenset(H[a][b]["id"] for a, b in zip(cyc, cyc[1:] + cyc[:1])))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def cycle_vertices(G: CapGraph, cyc) -> frozenset:
    return frozenset(v for e in cyc for v in G.edges[e])


def disjoint_families(G: CapGraph, cycles, size: int):
    """Families of ``size`` pairwise vertex-disjoint cycles, in lexicographic order."""
    verts = [cycle_vertices(G, c) for c in cycles]

    def extend(start, used, chosen):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for i in range(start, len(cycles)):
            if not (verts[i] & used):
                chosen.append(i)
                yield from extend(i + 1, used | verts[i], chosen)
                chosen.pop()

    for fam in extend(0, frozenset(), []):
        yield [cycles[i] for i in fam]
