import random

import pytest

from chipres.cells import graph_betti_table
from chipres.divisors import q_reduce
from chipres.ideals import Binomial, Monomial, alexander_dual_gens, cut_generators
from chipres.oracle import (OracleError, TermOrder, brute_alexander_dual, brute_bq_min,
                            buchberger_verify, firing_script, grevlex_q_order, groebner_basis,
                            hochster_betti, initial_ideal, oracle_betti, random_weight_order,
                            taylor_betti, weight_order)

from conftest import ATLAS, doubled_edge_graphs

DOUBLED = doubled_edge_graphs()


def M(*exps, ring="R"):
    return Monomial(ring, tuple(exps))


def B(lead, trail):
    return Binomial(M(*lead), M(*trail))


def test_taylor_small_examples():
    assert taylor_betti([M(1)]) == {(0, 1): 1}
    assert taylor_betti([M(1, 0), M(0, 1)]) == {(0, 1): 2, (1, 2): 1}
    assert taylor_betti([M(2, 0), M(1, 1), M(0, 2)]) == {(0, 2): 3, (1, 3): 2}
    assert taylor_betti([]) == {}


def test_taylor_non_minimal_input():
    assert taylor_betti([M(1, 0), M(2, 0), M(1, 1)]) == {(0, 1): 1}


def test_taylor_bound():
    gens = [M(*[1 if i == j else 0 for i in range(20)]) for j in range(20)]
    with pytest.raises(OracleError, match="Taylor bound"):
        taylor_betti(gens)
    assert taylor_betti(gens[:4], bound=4)[(3, 4)] == 1


def test_hochster_koszul():
    gens = [M(*[1 if i == j else 0 for i in range(4)]) for j in range(4)]
    assert hochster_betti(gens) == {(0, 1): 4, (1, 2): 6, (2, 3): 4, (3, 4): 1}


def test_hochster_rejects_powers():
    with pytest.raises(OracleError, match="squarefree"):
        hochster_betti([M(2, 0)])


def test_taylor_agrees_with_hochster_on_random_squarefree():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 6)
        gens = [M(*[rng.randint(0, 1) for _ in range(n)]) for _ in range(rng.randint(1, 6))]
        gens = [g for g in gens if not g.is_one] or [M(*([1] + [0] * (n - 1)))]
        assert taylor_betti(gens) == hochster_betti(gens)


def test_oracle_known_graphs(k3, fig12):
    assert oracle_betti(k3, 2, "MG") == {(0, 2): 3, (1, 3): 2}
    assert sum(v for (i, _), v in oracle_betti(fig12, 3).items() if i == 1) == 9
    with pytest.raises(OracleError):
        oracle_betti(k3, 2, "IG")


@pytest.mark.parametrize("name, G, q", DOUBLED)
def test_oracle_on_doubled_edges(name, G, q):
    table = graph_betti_table(G, q)
    assert oracle_betti(G, q, "OG") == table
    assert oracle_betti(G, q, "MG") == table


@pytest.mark.parametrize("name, G, q", ATLAS[:20])
def test_hochster_on_og(name, G, q):
    assert hochster_betti(cut_generators(G, q, "OG").elements) == graph_betti_table(G, q)


def test_term_order_grevlex():
    order = TermOrder((2, 1, 0))  # x0 > x1 > x2
    assert order.key((1, 0, 0)) > order.key((0, 1, 0)) > order.key((0, 0, 1))
    assert order.key((0, 2, 0)) > order.key((1, 0, 1))  # grevlex: x2 divides the second
    assert order.key((0, 0, 2)) > order.key((1, 0, 0))  # degree first
    w = weight_order((1, 5, 1))
    assert w.key((0, 1, 0)) > w.key((3, 0, 0))


def test_buchberger_textbook():
    order = TermOrder((3, 2, 1, 0))
    cubic = [B((1, 0, 1, 0), (0, 2, 0, 0)), B((0, 1, 0, 1), (0, 0, 2, 0)),
             B((1, 0, 0, 1), (0, 1, 1, 0))]
    assert buchberger_verify(cubic, order)
    bad = [B((2, 0), (0, 2)), M(1, 1)]
    assert not buchberger_verify(bad, TermOrder((1, 0)))
    gb = groebner_basis(bad, TermOrder((1, 0)))
    assert any(set(p) == {(0, 3)} for p in gb)


def test_grevlex_q_basis(k3, fig12):
    assert buchberger_verify(cut_generators(k3, 2, "IG"), grevlex_q_order(k3, 2))
    assert buchberger_verify(cut_generators(fig12, 3, "IG"), grevlex_q_order(fig12, 3))


def test_dropping_a_generator_breaks_the_basis(k3):
    gs = cut_generators(k3, 2, "IG").elements
    assert not buchberger_verify(gs[1:], grevlex_q_order(k3, 2))


def test_random_weight_order_avoids_ties(fig12):
    gens = cut_generators(fig12, 3, "JG").elements
    order = random_weight_order(gens, 10, random.Random(3))
    for g in gens:
        assert order.key(g.lead.exps)[0] != order.key(g.trail.exps)[0]
    with pytest.raises(OracleError):
        random_weight_order([B((1, 0), (0, 1))], 2, random.Random(0), attempts=0)


def test_initial_ideal():
    assert initial_ideal([B((1, 0), (0, 1))], (2, 1)) == [M(1, 0)]
    assert initial_ideal([B((1, 0), (0, 1))], (1, 1)) is None


def test_firing_script(k3):
    f = firing_script(k3, 2, [2, 0, 0], [0, 1, 1])
    assert f[2] == 0
    with pytest.raises(OracleError, match="not linearly equivalent"):
        firing_script(k3, 2, [1, 0, 0], [0, 1, 0])


def test_brute_bq_min(k3, fig12):
    assert brute_bq_min(k3, 2, [2, 0, 0], 0) == [2, 0, 0]
    assert brute_bq_min(k3, 2, [2, 0, 0], 2) == q_reduce(k3, 2, [2, 0, 0])
    assert brute_bq_min(k3, 2, [-5, 0, 0], 0) is None
    D = [3, 0, 1, -2]
    assert brute_bq_min(fig12, 3, D, 3) == q_reduce(fig12, 3, D)


def test_brute_alexander_dual(k3):
    gens = cut_generators(k3, 2, "MG").elements
    assert set(brute_alexander_dual(gens, [2, 2, 0])) == set(alexander_dual_gens(k3, 2))
    assert brute_alexander_dual([], [1, 1]) == []
    with pytest.raises(OracleError, match="divide"):
        brute_alexander_dual(gens, [1, 1, 0])


@pytest.mark.parametrize("name, G, q", [g for g in ATLAS if 2 <= g[1].n <= 4])
def test_brute_bq_min_stabilizes(name, G, q):
    rng = random.Random(name)
    for _ in range(5):
        D = [rng.randint(0, 3) for _ in range(G.n)]
        red = q_reduce(G, q, D)
        r = max(map(abs, firing_script(G, q, D, red)))
        assert brute_bq_min(G, q, D, r) == brute_bq_min(G, q, D, r + 1) == red
