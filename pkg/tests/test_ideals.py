import random

import pytest

from chipres.divisors import q_reduce
from chipres.graph import count_spanning_trees, enumerate_bonds
from chipres.ideals import (Binomial, IdealError, Monomial, alexander_dual_gens, cut_generators,
                            default_distinguished, facets_and_primes, find_facet, form_str,
                            grevlex_q_less, in_ideal, lsop_sets, lsop_verified, minimalize,
                            normal_form_IG, normal_form_via_reduction, parking_count,
                            restricted_rank, specialize_phi, variable_order)
from chipres.oracle import brute_alexander_dual

from conftest import ATLAS, SWEEP


def R(*exps):
    return Monomial("R", tuple(exps))


def S(G, *names):
    """Squarefree monomial of ``S`` from oriented-edge names such as ``"e2"`` or ``"eb3"``."""
    lookup = {G.oriented_name(e): e for e in range(2 * G.m)}
    return Monomial.from_support("S", 2 * G.m, [lookup[n] for n in names])


def as_pairs(gs):
    return {(str(b.lead), str(b.trail)) for b in gs.elements}


def test_monomial_arithmetic():
    a, b = R(2, 1, 0), R(1, 3, 0)
    assert a * b == R(3, 4, 0)
    assert (a / b).is_laurent
    assert a.lcm(b) == R(2, 3, 0)
    assert R(1, 0, 0).divides(a) and not b.divides(a)
    assert str(a) == "x1^2*x2" and str(R(0, 0, 0)) == "1"
    assert a.exponent_map() == {"x1": 2, "x2": 1}
    with pytest.raises(IdealError, match="ring"):
        a * Monomial("S", (1, 0, 0))


def test_k3_ig_minimal(k3):
    gs = cut_generators(k3, 2, "IG")
    assert gs.minimal
    got = {frozenset((str(b.lead), str(b.trail))) for b in gs.elements}
    assert got == {frozenset(("x1^2", "x2*x3")), frozenset(("x3^2", "x1*x2")),
                   frozenset(("x1*x3", "x2^2"))}


def test_fig12_mg(fig12):
    got = {str(m) for m in cut_generators(fig12, 3, "MG").elements}
    assert got == {"x2^2*x3", "x1*x2^2", "x3^2", "x2^3", "x1^2", "x1*x2*x3"}


def test_fig12_og(fig12):
    G = fig12
    want = {S(G, "eb1", "e4", "e5"), S(G, "e2", "e3", "e5"), S(G, "eb3", "e4"),
            S(G, "eb1", "e3", "e5"), S(G, "e1", "e2"), S(G, "e2", "e4", "e5")}
    assert set(cut_generators(G, 3, "OG").elements) == want


def test_fig12_jg_trails(fig12):
    G = fig12
    pairs = {(b.lead, b.trail) for b in cut_generators(G, 3, "JG").elements}
    assert (S(G, "eb3", "e4"), S(G, "e3", "eb4")) in pairs
    assert (S(G, "e1", "e2"), S(G, "eb1", "eb2")) in pairs


def test_single_edge_mg(single_edge):
    assert [str(m) for m in cut_generators(single_edge, 1, "MG").elements] == ["x1"]


def test_all_cuts_superset(fig12):
    full = cut_generators(fig12, 3, "IG", minimal=False)
    assert len(full.elements) == 7 and not full.minimal
    assert as_pairs(cut_generators(fig12, 3, "IG")) <= as_pairs(full)


def test_unknown_ideal(k3):
    with pytest.raises(IdealError):
        cut_generators(k3, 2, "XX")


def test_grevlex_examples(k3):
    x1, x2, x3 = R(1, 0, 0), R(0, 1, 0), R(0, 0, 1)
    assert grevlex_q_less(k3, 2, x3, x1) and grevlex_q_less(k3, 2, x3, x2)
    assert grevlex_q_less(k3, 2, x1, R(2, 0, 0))
    assert grevlex_q_less(k3, 2, R(0, 0, 2), R(1, 1, 0))
    with pytest.raises(IdealError, match="ring"):
        grevlex_q_less(k3, 2, x1, Monomial("S", (1,) * 6))


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_ig_lead_is_grevlex_leading(name, G, q):
    for b in cut_generators(G, q, "IG").elements:
        assert grevlex_q_less(G, q, b.trail, b.lead)


def test_variable_order(fig12):
    assert variable_order(fig12, 3)[0] == 3


def test_normal_form_examples(k3):
    assert normal_form_IG(k3, 2, R(2, 0, 0)) == R(0, 1, 1)
    assert normal_form_IG(k3, 2, R(0, 0, 0)) == R(0, 0, 0)
    assert normal_form_IG(k3, 2, R(1, 0, 3)) == R(1, 0, 3)


@pytest.mark.parametrize("name, G, q", SWEEP[::3])
def test_normal_form_agrees_with_q_reduce(name, G, q):
    rng = random.Random(name)
    for _ in range(10):
        D = [rng.randint(0, 4) for _ in range(G.n)]
        nf = normal_form_IG(G, q, Monomial("R", tuple(D)))
        assert nf == normal_form_via_reduction(G, q, Monomial("R", tuple(D)))
        assert list(nf.exps) == q_reduce(G, q, D)


def test_specialize_phi(fig12):
    assert specialize_phi(fig12, S(fig12, "eb3", "e4")) == R(0, 0, 2, 0)
    assert specialize_phi(fig12, Monomial.one("S", 10)).is_one
    b = cut_generators(fig12, 3, "JG").elements[0]
    assert isinstance(specialize_phi(fig12, b), Binomial)
    with pytest.raises(IdealError):
        specialize_phi(fig12, R(1, 0, 0, 0))


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_phi_maps_generators(name, G, q):
    og = cut_generators(G, q, "OG").elements
    mg = cut_generators(G, q, "MG").elements
    assert [specialize_phi(G, m) for m in og] == list(mg)
    ig = cut_generators(G, q, "IG").elements
    jg = cut_generators(G, q, "JG").elements
    assert [specialize_phi(G, b) for b in jg] == list(ig)
    assert len(set(og)) == len(og) == len(minimalize(og))


def test_minimalize():
    assert minimalize([R(2, 0), R(1, 0), R(1, 1), R(1, 0)]) == [R(1, 0)]


TAUS = [
    {"e1", "e3", "e4", "e5", "eb2", "eb4", "eb5"},
    {"e1", "e3", "e4", "eb1", "eb2", "eb4", "eb5"},
    {"e2", "e3", "e4", "eb1", "eb2", "eb4", "eb5"},
    {"e1", "e3", "e5", "eb2", "eb3", "eb4", "eb5"},
    {"e1", "e3", "eb1", "eb2", "eb3", "eb4", "eb5"},
    {"e2", "e3", "eb1", "eb2", "eb3", "eb4", "eb5"},
    {"e1", "e5", "eb1", "eb2", "eb3", "eb4", "eb5"},
    {"e2", "e5", "eb1", "eb2", "eb3", "eb4", "eb5"},
]


def facet_names(G):
    return [{G.oriented_name(e) for e in f.facet} for f in facets_and_primes(G, G.n - 1)]


def test_fig12_facets(fig12):
    got = facet_names(fig12)
    assert len(got) == 8
    assert sorted(map(sorted, got)) == sorted(map(sorted, TAUS))


def test_k3_facets(k3):
    assert [len(f) for f in facet_names(k3)] == [4, 4, 4]


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_facets_avoid_generators(name, G, q):
    og = cut_generators(G, q, "OG").elements
    for f in facets_and_primes(G, q):
        assert len(f.facet) == 2 * G.m - G.n + 1
        assert not any(set(g.support) <= set(f.facet) for g in og)


def test_find_facet_fig12(fig12):
    G = fig12
    tau8 = S(G, "e2", "e5", "eb1", "eb2", "eb3", "eb4", "eb5")
    assert find_facet(G, 3, tau8) == (0, 2, 3)  # O_T = {e1, e3, e4}
    with pytest.raises(IdealError, match="lies in the ideal"):
        find_facet(G, 3, S(G, "eb3", "e4"))
    with pytest.raises(IdealError, match="squarefree"):
        find_facet(G, 3, S(G, "e1") * S(G, "e1"))


def test_find_facet_single_edge(single_edge):
    assert find_facet(single_edge, 1, Monomial.one("S", 2)) == (0,)


@pytest.mark.parametrize("name, G, q", ATLAS)
def test_find_facet_contains_support(name, G, q):
    og = cut_generators(G, q, "OG").elements
    for f in facets_and_primes(G, q):
        m = Monomial.from_support("S", 2 * G.m, f.facet)
        assert not in_ideal(og, m)
        orient = find_facet(G, q, m)
        assert not set(f.facet) & set(orient)


FIG12_L = {"y2-y1", "yb1-y3", "y5-y3", "yb3-y4", "yb2-yb4", "yb5-yb4"}


def test_lsop_fig12(fig12):
    dist = default_distinguished(fig12)
    dist[3] = 8  # eb4 points into u4
    L, Lq = lsop_sets(fig12, 3, dist)
    assert {form_str(fig12, f) for f in L} == FIG12_L
    assert len(Lq) == 7
    assert lsop_verified(fig12, 3, Lq)
    tau1 = [f for f in facets_and_primes(fig12, 3)
            if {fig12.oriented_name(e) for e in f.facet} == TAUS[0]][0]
    assert restricted_rank(Lq, tau1.facet) == 7


def test_lsop_wrong_head(fig12):
    with pytest.raises(IdealError, match="does not point"):
        lsop_sets(fig12, 3, {0: 2, 1: 2, 2: 3, 3: 8})


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_lsop_sizes_and_property(name, G, q):
    L, Lq = lsop_sets(G, q)
    assert len(Lq) == 2 * G.m - G.n + 1
    assert len(L) == max(2 * G.m - G.n, 0)
    assert lsop_verified(G, q, Lq)


def test_alexander_dual_examples(fig12, k3, single_edge):
    got = {str(m) for m in alexander_dual_gens(fig12, 3)}
    assert got == {"x1*x2^2*x3^2", "x1*x2^3*x3", "x1^2*x2^2*x3", "x1^2*x2*x3^2"}
    assert [str(m) for m in alexander_dual_gens(single_edge, 1)] == ["x1"]
    assert {str(m) for m in alexander_dual_gens(k3, 2)} == {"x1*x2^2", "x1^2*x2"}


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_alexander_dual_brute_force(name, G, q):
    mg = cut_generators(G, q, "MG").elements
    a = [G.degrees[v] if v != q else 0 for v in range(G.n)]
    assert set(alexander_dual_gens(G, q)) == set(brute_alexander_dual(mg, a))


def test_parking_examples(k3, fig12, single_edge):
    assert parking_count(k3, 2) == 3
    assert parking_count(fig12, 3) == 8
    assert parking_count(single_edge, 1) == 1


@pytest.mark.parametrize("name, G, q", SWEEP[::4])
def test_every_bond_generator_divides_its_cut(name, G, q):
    for b, m in zip(enumerate_bonds(G, q), cut_generators(G, q, "OG").elements):
        assert m.degree == sum(1 for e in range(2 * G.m)
                               if G.head(e) in b.complement and G.tail(e) in b.side)
    assert parking_count(G, q) == count_spanning_trees(G)
