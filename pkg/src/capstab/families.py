"""Instance generators: worked examples, odd cycles, seeded random graphs and
the small-graph suites used by the acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import networkx as nx

from .graph import CapGraph, as_fraction


def fig1(k: int = 3, eps=Fraction(1, 4)) -> CapGraph:
    """Unit capacities; ``u-a`` (eps), ``v-w`` (1), ``w-a`` (1) and, for each
    i, a triangle ``a, b_i, c_i`` with weights 2 (a-b_i), 1 (a-c_i), 2 (b_i-c_i)."""
    eps = as_fraction(eps)
    if not isinstance(k, int) or k < 3:
        raise ValueError("k must be an integer >= 3")
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie strictly between 0 and 1/2")
    names = ["u", "v", "w", "a"]
    for i in range(1, k + 1):
        names += [f"b{i}", f"c{i}"]
    edges = [("u", "a", eps), ("v", "w", 1), ("w", "a", 1)]
    for i in range(1, k + 1):
        edges += [("a", f"b{i}", 2), ("a", f"c{i}", 1), (f"b{i}", f"c{i}", 2)]
    return CapGraph.build([(n, 1) for n in names], edges)


def fig1_matching(G: CapGraph) -> frozenset:
    """The unique maximum matching of :func:`fig1`: u-a, v-w and every b_i-c_i."""
    out = {G.edge_id(G.vertex("u"), G.vertex("a")), G.edge_id(G.vertex("v"), G.vertex("w"))}
    for e, (p, q) in enumerate(G.edges):
        if G.labels[p].startswith("b") and G.labels[q].startswith("c"):
            out.add(e)
    return frozenset(out)


def fig2() -> CapGraph:
    """Unit weights; capacity 2 at v, x and b."""
    caps = {"t": 1, "u": 1, "v": 2, "x": 2, "y": 1, "z": 1, "c": 1, "b": 2, "a": 1}
    edges = [("t", "u"), ("u", "v"), ("v", "x"), ("x", "y"), ("x", "z"), ("y", "z"),
             ("v", "c"), ("c", "b"), ("b", "a")]
    return CapGraph.build(list(caps.items()), [(p, q, 1) for p, q in edges])


def fig3() -> CapGraph:
    """Pendant a-b (5) on the 5-cycle b, c, d, e, f with weights 5, 2, 1, 2, 5;
    capacity 2 at b."""
    caps = [("a", 1), ("b", 2), ("c", 1), ("d", 1), ("e", 1), ("f", 1)]
    edges = [("a", "b", 5), ("b", "c", 5), ("c", "d", 2), ("d", "e", 1),
             ("e", "f", 2), ("f", "b", 5)]
    return CapGraph.build(caps, edges)


def fig4() -> CapGraph:
    """Two unit triangles a, b, c and d, e, f joined by c-d; capacity 2 at c."""
    caps = [("a", 1), ("b", 1), ("c", 2), ("d", 1), ("e", 1), ("f", 1)]
    edges = [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("d", "e"), ("d", "f"), ("e", "f")]
    return CapGraph.build(caps, [(p, q, 1) for p, q in edges])


def naive_copy_expansion(G: CapGraph) -> CapGraph:
    """Replace every vertex by ``c_v`` unit-capacity copies and every edge by
    all edges between the copies of its ends (same weight)."""
    verts, copies = [], []
    for v in range(G.n):
        copies.append([f"{G.labels[v]}:{i}" for i in range(G.capacities[v])])
        verts += [(lab, 1) for lab in copies[-1]]
    edges = [(p, q, w) for (u, v), w in zip(G.edges, G.weights)
             for p in copies[u] for q in copies[v]]
    return CapGraph.build(verts, edges)


def odd_cycle(n: int, weight=1, capacity: int = 1) -> CapGraph:
    if n < 3 or n % 2 == 0:
        raise ValueError("odd cycle length must be odd and at least 3")
    return cycle(n, weight, capacity)


def cycle(n: int, weight=1, capacity: int = 1) -> CapGraph:
    if n < 3:
        raise ValueError("cycle length must be at least 3")
    return CapGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)],
                               [capacity] * n, [weight] * n)


def random_graph(n: int, seed: int, density: float = 0.5, weights=(1, 2, 3),
                 capacities=(1, 2), max_edges: int | None = None) -> CapGraph:
    """Seeded G(n, p)-style graph with weights and capacities drawn uniformly
    from the given choices."""
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    if max_edges is not None and len(pairs) > max_edges:
        pairs = sorted(rng.sample(pairs, max_edges))
    caps = [rng.choice(capacities) for _ in range(n)]
    ws = [rng.choice(weights) for _ in pairs]
    return CapGraph.from_edges(n, pairs, caps, ws)


# -- suites -----------------------------------------------------------------

def connected_shapes(max_n: int = 6) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """Every connected simple graph on 2..max_n vertices (up to isomorphism),
    as ``(n, edges)``, from the graph atlas."""
    if max_n > 7:
        raise ValueError("the atlas covers at most 7 vertices")
    out = []
    for H in nx.graph_atlas_g():
        n = H.number_of_nodes()
        if 2 <= n <= max_n and nx.is_connected(H):
            out.append((n, tuple(sorted(tuple(sorted(e)) for e in H.edges()))))
    return out


def capacity_vectors(n: int, choices=(1, 2)):
    return list(product(choices, repeat=n))


def small_suite(max_n: int = 6, max_edges: int | None = None, caps_per_shape: int | None = None,
                weighted: bool = True, seed: int = 0):
    """Yield ``(name, graph)`` for connected shapes with capacities in {1, 2}.

    Every capacity vector is used unless ``caps_per_shape`` is given, in which
    case all-ones, all-twos and seeded random vectors are used up to that
    count.  Each shape/capacity pair appears with unit weights and, if
    ``weighted``, with one seeded weight vector over {1, 2, 3}.
    """
    rng = random.Random(seed)
    for idx, (n, edges) in enumerate(connected_shapes(max_n)):
        if max_edges is not None and len(edges) > max_edges:
            continue
        vecs = capacity_vectors(n)
        if caps_per_shape is not None and len(vecs) > caps_per_shape:
            chosen = [vecs[0], vecs[-1]]
            rest = vecs[1:-1]
            chosen += rng.sample(rest, caps_per_shape - 2)
            vecs = chosen
        for ci, caps in enumerate(vecs):
            yield (f"shape{idx}-c{ci}-unit", CapGraph.from_edges(n, edges, caps))
            if weighted:
                ws = [rng.choice((1, 2, 3)) for _ in edges]
                yield (f"shape{idx}-c{ci}-w", CapGraph.from_edges(n, edges, caps, ws))


def random_suite(count: int = 500, max_n: int = 8, max_edges: int = 14, seed: int = 2024):
    """Seeded random graphs with 3..max_n vertices, weights in {1, 2, 3} and
    capacities in {1, 2}."""
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(3, max_n)
        s = rng.randrange(1 << 30)
        density = rng.choice((0.3, 0.5, 0.7))
        yield (f"random{i}", random_graph(n, s, density, max_edges=max_edges))


FAMILIES = ("fig1", "fig2", "fig3", "fig4", "odd_cycle", "cycle", "random")


def generate_family(name: str, params: dict | None = None, seed: int = 0) -> CapGraph:
    """Build a named family; ``params`` are passed as keyword arguments and
    ``seed`` only affects ``random``."""
    params = dict(params or {})
    for key in ("k", "n", "capacity", "max_edges"):
        if key in params and Fraction(params[key]).denominator != 1:
            raise ValueError(f"{key} must be an integer, got {params[key]}")
    if name == "fig1":
        return fig1(int(params.get("k", 3)), as_fraction(params.get("eps", Fraction(1, 4))))
    if name == "fig2":
        return fig2()
    if name == "fig3":
        return fig3()
    if name == "fig4":
        return fig4()
    if name == "odd_cycle":
        return odd_cycle(int(params.get("n", 5)), as_fraction(params.get("weight", 1)),
                         int(params.get("capacity", 1)))
    if name == "cycle":
        return cycle(int(params.get("n", 4)), as_fraction(params.get("weight", 1)),
                     int(params.get("capacity", 1)))
    if name == "random":
        return random_graph(int(params.get("n", 6)), seed, float(params.get("density", 0.5)),
                            max_edges=None if "max_edges" not in params else int(params["max_edges"]))
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
