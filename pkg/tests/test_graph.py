from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from capstab.families import cycle, fig2
from capstab.graph import (
    CapGraph, GraphError, apply_walk, classify_walk, degree_in_matching, epsilon_augmentation,
    make_walk, validate_c_matching, walk_from_vertices,
)
from capstab.oracle import brute_max_c_matching

from strategies import graph_and_matching


def triangle(caps=(1, 1, 1)):
    return CapGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], caps)


def c5(cap5=1):
    # vertices v1..v5 are ids 0..4; edges e12, e23, e34, e45, e15
    return CapGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], [1, 1, 1, 1, cap5])


# -- construction ---------------------------------------------------------------

def test_rejects_self_loop_parallel_and_negative():
    with pytest.raises(GraphError):
        CapGraph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        CapGraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        CapGraph.from_edges(2, [(0, 1)], weights=[-1])
    with pytest.raises(GraphError):
        CapGraph.from_edges(2, [(0, 1)], capacities=[1, -1])


def test_float_weights_rejected():
    with pytest.raises((GraphError, TypeError, ValueError)):
        CapGraph.from_edges(2, [(0, 1)], weights=[0.5])


def test_adjacency_index_and_max_degree():
    G = CapGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)], [3, 1, 1, 1])
    assert G.incidence[0] == (0, 1, 2)
    assert G.max_degree == 3
    assert G.edge_id(3, 0) == 2


def test_graphs_are_hashable_values():
    assert triangle() == triangle()
    assert hash(triangle()) == hash(triangle())
    assert triangle() != triangle((1, 2, 1))


# -- c-matchings ---------------------------------------------------------------

def test_degree_in_matching():
    G = triangle()
    assert degree_in_matching(G, {0}, 0) == 1
    assert degree_in_matching(G, {0}, 2) == 0
    star = CapGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)], [3, 1, 1, 1])
    assert degree_in_matching(star, {0, 1, 2}, 0) == 3


def test_degree_unknown_vertex():
    with pytest.raises(GraphError):
        degree_in_matching(triangle(), set(), 7)


def test_validate_c_matching():
    G = triangle()
    assert not validate_c_matching(G, {0, 1})
    assert validate_c_matching(G, {0})
    F2 = fig2()
    b = F2.vertex("b")
    assert validate_c_matching(F2, set(F2.incidence[b]))
    with pytest.raises(GraphError):
        validate_c_matching(G, {9})


# -- walks ---------------------------------------------------------------------

def _direct_flags(G, M, W):
    """Independent recomputation of the four walk flags."""
    seq = W.steps
    alt = all((a in M) != (b in M) for a, b in zip(seq, seq[1:]))
    if W.closed and len(seq) > 1 and len(seq) % 2 == 0:
        alt = alt and (seq[0] in M) != (seq[-1] in M)
    k = Counter(seq)
    gain = sum((-1 if e in M else 1) * G.weights[e] for e in seq)

    def loads(x):
        return [sum(x[e] for e in G.incidence[v]) for v in range(G.n)]

    flipped = [(1 if e in M else 0) + (-k[e] if e in M else k[e]) for e in range(G.m)]
    proper = all(v in (0, 1) for v in flipped) and all(
        l <= c for l, c in zip(loads(flipped), G.capacities))
    feasible = False
    for eps in (Fraction(1, 2 * len(seq)), Fraction(1, 10 * len(seq)), Fraction(1, 1000)):
        x = [(1 - k[e] * eps) if e in M else k[e] * eps for e in range(G.m)]
        if all(0 <= v <= 1 for v in x) and all(l <= c for l, c in zip(loads(x), G.capacities)):
            feasible = True
    return alt, alt and gain > 0, alt and proper, alt and feasible


def test_c5_odd_closed_walk_not_proper_but_feasible():
    G = c5()
    M = {0, 2}
    W = make_walk(G, 4, [3, 2, 1, 0, 4])
    flags = classify_walk(G, M, W)
    assert tuple(flags) == (True, True, False, True)
    assert tuple(flags) == _direct_flags(G, M, W)


def test_non_alternating_walk():
    G = c5()
    W = make_walk(G, 0, [0, 1])  # two consecutive non-matching edges
    assert classify_walk(G, set(), W).alternating is False


def test_single_edge_walk_on_path():
    G = CapGraph.from_edges(3, [(0, 1), (1, 2)])
    W = make_walk(G, 0, [0])
    assert tuple(classify_walk(G, set(), W)) == (True, True, True, True)


def test_non_walk_rejected():
    G = CapGraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError):
        make_walk(G, 0, [0, 1])


def test_epsilon_augmentation_examples():
    G = CapGraph.from_edges(2, [(0, 1)])
    W = make_walk(G, 0, [0])
    assert epsilon_augmentation(G, set(), W, Fraction(1, 2)) == (Fraction(1, 2),)
    assert epsilon_augmentation(G, {0}, W, Fraction(1, 4)) == (Fraction(3, 4),)
    with pytest.raises(ValueError):
        epsilon_augmentation(G, set(), W, 0)


def test_epsilon_augmentation_counts_repeats():
    # pendant u-a on triangle a, b, c; the closed walk uses u-a twice
    G = CapGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)], [1, 2, 1, 1])
    M = {1, 3}
    W = walk_from_vertices(G, [0, 1, 2, 3, 1, 0])
    assert W.kappa()[0] == 2
    x = epsilon_augmentation(G, M, W, Fraction(1, 4))
    assert x[0] == Fraction(1, 2)


def test_apply_walk_examples():
    G = CapGraph.from_edges(3, [(0, 1), (1, 2)])
    W = make_walk(G, 0, [0])
    assert apply_walk(G, set(), W) == {0}
    assert apply_walk(G, {0}, W) == frozenset()


def test_apply_walk_c5_capacity_two():
    G = c5(cap5=2)
    M = {0, 2}
    W = make_walk(G, 4, [3, 2, 1, 0, 4])
    assert classify_walk(G, M, W).proper
    out = apply_walk(G, M, W)
    assert len(out) == 3
    assert brute_max_c_matching(G)[1] == 3
    with pytest.raises(ValueError):
        apply_walk(c5(), M, W)


def _walks(G, length):
    for start in range(G.n):
        def rec(cur, steps):
            yield make_walk(G, start, steps) if steps else None
            if len(steps) == length:
                return
            for e in G.incidence[cur]:
                yield from rec(G.other(e, cur), steps + [e])
        for W in rec(start, []):
            if W is not None:
                yield W


@pytest.mark.parametrize("G", [c5(), c5(2), triangle((2, 1, 1)), cycle(4, capacity=2),
                               CapGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)],
                                                   [1, 2, 1, 1])])
def test_flags_match_direct_construction_exhaustively(G):
    matchings = [set(M) for bits in product((0, 1), repeat=G.m)
                 for M in [{e for e in range(G.m) if bits[e]}] if validate_c_matching(G, M)]
    for M in matchings:
        for W in _walks(G, 6):
            assert tuple(classify_walk(G, M, W)) == _direct_flags(G, M, W)


@given(graph_and_matching(max_n=5, max_edges=7), st.data())
def test_apply_walk_is_an_involution(pair, data):
    G, M = pair
    start = data.draw(st.integers(0, G.n - 1))
    steps, cur = [], start
    for _ in range(data.draw(st.integers(1, 6))):
        if not G.incidence[cur]:
            break
        e = data.draw(st.sampled_from(G.incidence[cur]))
        steps.append(e)
        cur = G.other(e, cur)
    if not steps:
        return
    W = make_walk(G, start, steps)
    flags = classify_walk(G, M, W)
    assert tuple(flags) == _direct_flags(G, M, W)
    if flags.proper:
        M2 = apply_walk(G, M, W)
        assert validate_c_matching(G, M2)
        assert apply_walk(G, M2, W) == M
        if flags.augmenting:
            assert G.weight_of(M2) > G.weight_of(M)
