"""Hypothesis strategies for small capacitated graphs."""

from fractions import Fraction

from hypothesis import strategies as st

from capstab.graph import CapGraph


@st.composite
def cap_graphs(draw, min_n=2, max_n=6, max_edges=9, caps=(1, 2), weights=(1, 2, 3),
               unit_weight=False, rational=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1,
                           max_size=min(max_edges, len(pairs))))
    chosen.sort()
    cs = [draw(st.sampled_from(caps)) for _ in range(n)]
    if unit_weight:
        ws = [1] * len(chosen)
    elif rational:
        ws = [Fraction(draw(st.integers(0, 6)), draw(st.sampled_from((1, 2, 3))))
              for _ in chosen]
    else:
        ws = [draw(st.sampled_from(weights)) for _ in chosen]
    return CapGraph.from_edges(n, chosen, cs, ws)


@st.composite
def graph_and_matching(draw, **kw):
    G = draw(cap_graphs(**kw))
    order = draw(st.permutations(range(G.m)))
    load = [0] * G.n
    M = set()
    for e in order:
        u, v = G.edges[e]
        if draw(st.booleans()) and load[u] < G.capacities[u] and load[v] < G.capacities[v]:
            M.add(e)
            load[u] += 1
            load[v] += 1
    return G, frozenset(M)
