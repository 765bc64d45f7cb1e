from fractions import Fraction

import pytest
from hypothesis import given, settings

from capstab.config import ScaleError
from capstab.families import fig3, fig4, odd_cycle
from capstab.gamma import (
    TranslationError, gamma_exact, min_cycle_optimum, to_unit_capacity, translate_from_unit,
)
from capstab.graph import CapGraph
from capstab.lp import is_basic, solve_fractional
from capstab.oracle import brute_gamma, brute_is_stable, flow_fractional_value

from strategies import cap_graphs

H = Fraction(1, 2)


def triangle():
    return CapGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def two_triangles(weights=None):
    return CapGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
                               weights=weights)


def test_single_edge_gadget():
    G = CapGraph.from_edges(2, [(0, 1)], weights=[7])
    R = to_unit_capacity(G)
    assert R.graph.n == 4 and R.graph.m == 3
    assert set(R.graph.capacities) == {1}
    assert all(w == 7 for w in R.graph.weights)
    assert R.offset == 7


def test_fig4_auxiliary_shape():
    G = fig4()
    R = to_unit_capacity(G)
    assert R.graph.n == sum(G.capacities) + 2 * G.m == 21
    assert R.graph.m == sum(G.capacities[u] + G.capacities[v] + 1 for u, v in G.edges) == 24
    c = G.vertex("c")
    assert len(R.copies[c]) == 2


def test_triangle_auxiliary_value():
    R = to_unit_capacity(triangle())
    assert R.graph.m == 9
    assert flow_fractional_value(R.graph) == Fraction(3, 2) + 3


def test_translate_gadget_scenarios():
    G = CapGraph.from_edges(2, [(0, 1)])
    R = to_unit_capacity(G)
    mid = [0] * 3
    mid[R.middle[0]] = 1
    assert translate_from_unit(R, mid).x.values == (0,)
    outer = [1] * 3
    outer[R.middle[0]] = 0
    assert translate_from_unit(R, outer).x.values == (1,)
    T = to_unit_capacity(triangle())
    assert translate_from_unit(T, (H,) * 9).x.values == (H, H, H)


def test_translate_rejects_infeasible():
    R = to_unit_capacity(CapGraph.from_edges(2, [(0, 1)]))
    with pytest.raises(TranslationError):
        translate_from_unit(R, (1, 1, 1))


def test_min_cycle_examples():
    assert min_cycle_optimum(CapGraph.from_edges(2, [(0, 1)])).cycle_count == 0
    assert min_cycle_optimum(triangle(), "exact").cycle_count == 1
    opt = min_cycle_optimum(fig3(), "exact")
    assert opt.cycle_count == 1 and opt.value == Fraction(25, 2)
    assert opt.flag == "exact"
    assert min_cycle_optimum(fig3()).flag == "certified"


def test_gamma_exact_examples():
    assert gamma_exact(two_triangles()) == 2
    assert gamma_exact(odd_cycle(5)) == 1
    G = CapGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert solve_fractional(G).primal.cycle_count == 0
    assert gamma_exact(G) == 0


def test_exact_mode_has_a_size_bound():
    big = CapGraph.from_edges(13, [(i, i + 1) for i in range(12)] + [(0, 12)])
    with pytest.raises(ScaleError):
        gamma_exact(big)
    assert min_cycle_optimum(big).cycle_count == 1


def test_size_bound_env_override(monkeypatch):
    monkeypatch.setenv("CAPSTAB_ORACLE_MAX_EDGES", "2")
    with pytest.raises(ScaleError):
        gamma_exact(triangle())


@settings(max_examples=80)
@given(cap_graphs(max_n=7, max_edges=10, caps=(1, 2)))
def test_gamma_matches_oracle(G):
    exact = min_cycle_optimum(G, "exact")
    assert is_basic(G, exact.x.values) and G.value(exact.x.values) == exact.value
    assert exact.cycle_count == brute_gamma(G)
    assert (exact.cycle_count == 0) == brute_is_stable(G)
    heur = min_cycle_optimum(G)
    assert heur.cycle_count >= exact.cycle_count
    if heur.flag == "certified":
        assert heur.cycle_count == exact.cycle_count


@settings(max_examples=40)
@given(cap_graphs(max_n=5, max_edges=6, caps=(1, 2)))
def test_reduction_preserves_value_and_gamma(G):
    R = to_unit_capacity(G)
    assert flow_fractional_value(G) == flow_fractional_value(R.graph) - R.offset
    opt = min_cycle_optimum(R.graph, "exact", max_edges=R.graph.m)
    assert opt.cycle_count == gamma_exact(G)
    tr = translate_from_unit(R, opt.x.values)
    assert G.value(tr.x.values) == R.graph.value(opt.x.values) - R.offset
    assert tr.x.cycle_count == opt.cycle_count and tr.repairs == 0


def test_translate_splits_cycle_through_two_copies():
    # the auxiliary optimum is one odd cycle visiting both copies of 0, 2 and 3
    G = CapGraph.from_edges(6, [(0, 1), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (2, 5), (3, 4)],
                            [2, 1, 2, 2, 1, 1])
    R = to_unit_capacity(G)
    opt = min_cycle_optimum(R.graph, "exact", max_edges=R.graph.m)
    assert opt.cycle_count == 1 == gamma_exact(G)
    tr = translate_from_unit(R, opt.x.values)
    assert is_basic(G, tr.x.values)
    assert tr.x.cycle_count == 1 and tr.repairs == 0
    assert G.value(tr.x.values) == flow_fractional_value(G)
