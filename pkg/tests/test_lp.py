from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from capstab.families import cycle, fig3
from capstab.graph import CapGraph
from capstab.lp import (
    DualCover, InfeasibleError, NotBasicError, check_complementary_slackness, decompose_support,
    is_basic, solve_fractional,
)
from capstab.oracle import brute_basic_optima, enumerate_polytope_vertices, flow_fractional_value

from strategies import cap_graphs

H = Fraction(1, 2)


def triangle(caps=(1, 1, 1), w=1):
    return CapGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], caps, [w] * 3)


def test_triangle_optimum_and_dual():
    G = triangle()
    r = solve_fractional(G)
    assert r.primal_value == Fraction(3, 2) == brute_basic_optima(G).value
    assert r.primal.values == (H, H, H)
    assert r.dual.y == (H, H, H)
    assert r.dual.z == (0, 0, 0)


def test_single_edge():
    G = CapGraph.from_edges(2, [(0, 1)], weights=[5])
    r = solve_fractional(G)
    assert r.primal_value == 5 and r.primal.values == (1,)


def test_fig3_optimum_and_dual():
    G = fig3()
    r = solve_fractional(G)
    assert r.primal_value == Fraction(25, 2) == r.dual_value
    ab = G.edge_id(G.vertex("a"), G.vertex("b"))
    assert r.primal.values[ab] == 1
    assert all(v == H for e, v in enumerate(r.primal.values) if e != ab)
    assert r.dual.y == tuple(Fraction(v) for v in ("3/2", "7/2", "3/2", "1/2", "1/2", "3/2"))
    assert all(z == 0 for z in r.dual.z)


def test_zero_capacity_vertex_is_isolated():
    G = CapGraph.from_edges(3, [(0, 1), (1, 2)], [1, 0, 1], [4, 4])
    r = solve_fractional(G)
    assert r.primal_value == 0 and r.primal.values == (0, 0)


def test_is_basic_examples():
    assert is_basic(triangle(), (H, H, H))
    assert not is_basic(cycle(4), (H,) * 4)
    G = triangle((2, 1, 1))
    x = (H, H, H)
    assert not is_basic(G, x)
    # x is the midpoint of x +- g/2 for the odd-cycle circuit unbalanced at vertex 0
    g = (1, -1, 1)
    for s in (1, -1):
        y = tuple(a + s * H * b for a, b in zip(x, g))
        loads = [y[0] + y[2], y[0] + y[1], y[1] + y[2]]
        assert all(0 <= v <= 1 for v in y) and all(l <= c for l, c in zip(loads, G.capacities))


def test_is_basic_rejects_infeasible():
    with pytest.raises(InfeasibleError):
        is_basic(triangle(), (1, 1, 0))


def test_decompose_support_examples():
    cycles, matched = decompose_support(triangle(), (H, H, H))
    assert len(cycles) == 1 and len(cycles[0].edges) == 3 and matched == frozenset()
    G = fig3()
    cycles, matched = decompose_support(G, solve_fractional(G).primal.values)
    assert [len(c.edges) for c in cycles] == [5] and len(matched) == 1
    two = CapGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert len(decompose_support(two, (H,) * 6)[0]) == 2
    with pytest.raises(NotBasicError):
        decompose_support(cycle(4), (H,) * 4)


def test_complementary_slackness_examples():
    G = fig3()
    r = solve_fractional(G)
    assert check_complementary_slackness(G, r.primal.values, r.dual)[0]
    ok, violations = check_complementary_slackness(
        triangle(), (H, H, H), DualCover((0, 0, 0), (1, 1, 1)))
    assert not ok and {v.clause for v in violations} == {"edge-at-one"}
    ok, violations = check_complementary_slackness(
        triangle(), (H, H, H), DualCover((0, 1, 1), (1, 0, 0)))
    assert not ok
    e = CapGraph.from_edges(2, [(0, 1)], weights=[3])
    assert check_complementary_slackness(e, (1,), DualCover((3, 0), (0,)))[0]


def test_slackness_flags_uncovered_edge_separately():
    with pytest.raises(InfeasibleError):
        check_complementary_slackness(triangle(), (H, H, H), DualCover((0, 0, 0), (0, 0, 0)))


def _brute_half_max(G):
    best = None
    for x in product((0, H, 1), repeat=G.m):
        if all(sum(x[e] for e in G.incidence[v]) <= G.capacities[v] for v in range(G.n)):
            val = G.value(x)
            best = val if best is None or val > best else best
    return best


@given(cap_graphs(max_n=6, max_edges=8, caps=(0, 1, 2, 3), rational=True))
def test_solver_matches_oracles(G):
    r = solve_fractional(G)
    assert r.primal_value == r.dual_value
    assert check_complementary_slackness(G, r.primal.values, r.dual)[0]
    assert is_basic(G, r.primal.values)
    assert r.primal_value == flow_fractional_value(G)
    if G.m <= 7:
        assert r.primal_value == _brute_half_max(G)


@given(cap_graphs(max_n=6, max_edges=10, caps=(1, 2, 3)))
def test_solver_matches_flow_on_ten_edges(G):
    assert solve_fractional(G).primal_value == flow_fractional_value(G)


@given(cap_graphs(max_n=5, max_edges=6, caps=(1, 2)))
def test_is_basic_equals_polytope_vertices(G):
    verts = set(enumerate_polytope_vertices(G).vertices)
    for x in product((Fraction(0), H, Fraction(1)), repeat=G.m):
        if all(sum(x[e] for e in G.incidence[v]) <= G.capacities[v] for v in range(G.n)):
            assert is_basic(G, x) == (x in verts)
