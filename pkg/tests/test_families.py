from fractions import Fraction

import pytest

from capstab.families import (
    fig1, fig2, fig3, fig4, generate_family, naive_copy_expansion, odd_cycle, random_graph,
    small_suite,
)


def weights_by_label(G):
    return {frozenset((G.labels[u], G.labels[v])): w for (u, v), w in zip(G.edges, G.weights)}


def test_fig1_shape():
    G = fig1()
    assert G.n == 10 and G.m == 12 and set(G.capacities) == {1}
    w = weights_by_label(G)
    assert w[frozenset("ua")] == Fraction(1, 4) and w[frozenset("vw")] == 1
    assert w[frozenset(("a", "b2"))] == 2 and w[frozenset(("a", "c2"))] == 1
    assert w[frozenset(("b2", "c2"))] == 2
    assert fig1(5).n == 14


@pytest.mark.parametrize("k,eps", [(2, Fraction(1, 4)), (3, 0), (3, Fraction(1, 2))])
def test_fig1_rejects_bad_parameters(k, eps):
    with pytest.raises(ValueError):
        fig1(k, eps)


def test_fig1_rejects_fractional_k():
    with pytest.raises(ValueError):
        generate_family("fig1", {"k": Fraction(7, 2)})


def test_fig2_to_fig4():
    G = fig2()
    assert [G.labels[v] for v in range(G.n) if G.capacities[v] == 2] == ["v", "x", "b"]
    G = fig3()
    assert G.n == 6 and G.weights == (5, 5, 2, 1, 2, 5) and sorted(G.capacities) == [1] * 5 + [2]
    G = fig4()
    assert G.capacities == (1, 1, 2, 1, 1, 1) and G.m == 7


def test_naive_copy_expansion():
    H = naive_copy_expansion(fig2())
    assert H.n == 12 and set(H.capacities) == {1}
    assert H.m == 1 + 2 + 4 + 2 + 2 + 1 + 2 + 2 + 2


def test_odd_cycle_and_random():
    C = odd_cycle(5)
    assert C.n == C.m == 5 and set(C.weights) == {1}
    with pytest.raises(ValueError):
        odd_cycle(4)
    assert random_graph(7, 3) == random_graph(7, 3)
    assert generate_family("random", {"n": 6}, 11) == generate_family("random", {"n": 6}, 11)
    with pytest.raises(ValueError):
        generate_family("nope")


def test_small_suite_contents():
    suite = list(small_suite(max_n=3))
    # connected shapes on 2..3 vertices: K2, P3, K3
    assert len(suite) == 2 * (4 + 8 + 8)
    assert all(G.n <= 3 for _, G in suite)
