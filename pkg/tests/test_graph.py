import pytest

from chipres.graph import (GraphError, count_spanning_trees, cut_edges, enumerate_bonds,
                           enumerate_cuts, enumerate_spanning_trees, is_connected,
                           is_two_connected, laplacian, make_graph, parse_graph, spanning_trees)

from conftest import SWEEP


def test_parse_k3(k3):
    assert (k3.n, k3.m) == (3, 3)
    assert k3.vertices == ("u1", "u2", "u3")
    # first listed endpoint is the tail
    assert k3.tail(0) == 2 and k3.head(0) == 1


def test_parse_fig12(fig12):
    assert (fig12.n, fig12.m) == (4, 5)


def test_parse_single_edge(single_edge):
    assert (single_edge.n, single_edge.m) == (2, 1)


@pytest.mark.parametrize("text, message", [
    ('{"vertices": ["a", "b"], "edges": [["a", "a"]]}', "loop"),
    ('{"vertices": ["a", "b", "c"], "edges": [["a", "b"]]}', "not connected"),
    ('{"vertices": ["a", "b"], "edges": [["a", "z"]]}', "unknown vertex"),
    ('{"vertices": ["a"], "edges": [', "malformed"),
    ('{"vertices": ["a"]}', "needs"),
    ('{"vertices": ["a", "a"], "edges": []}', "duplicate"),
])
def test_parse_rejects(text, message):
    with pytest.raises(GraphError, match=message):
        parse_graph(text)


def test_oriented_edges(k3):
    assert k3.reverse(0) == 3 and k3.reverse(3) == 0
    assert k3.head(3) == k3.tail(0)
    assert [k3.oriented_name(e) for e in (0, 3)] == ["e1", "eb1"]


def test_laplacian_examples(k3, single_edge):
    assert laplacian(k3) == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert laplacian(k3, reduced_at=2) == [[2, -1], [-1, 2]]
    assert laplacian(single_edge) == [[1, -1], [-1, 1]]


def test_laplacian_parallel_edges():
    G = make_graph(["a", "b"], [("a", "b"), ("b", "a")])
    assert laplacian(G) == [[2, -2], [-2, 2]]


@pytest.mark.parametrize("name, G, q", SWEEP[::5])
def test_laplacian_symmetric_zero_sums(name, G, q):
    L = laplacian(G)
    assert all(L[i][j] == L[j][i] for i in range(G.n) for j in range(G.n))
    assert all(sum(row) == 0 for row in L)


def test_bonds_k3(k3):
    sides = [set(b.side) for b in enumerate_bonds(k3, 2)]
    assert sides == [{1, 2}, {0, 2}, {2}]  # ordered by A^c = {u1}, {u2}, {u1,u2}


def test_bonds_fig12(fig12, single_edge):
    assert len(enumerate_bonds(fig12, 3)) == 6
    assert len(enumerate_bonds(single_edge, 1)) == 1


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_bonds_have_connected_sides(name, G, q):
    bonds = enumerate_bonds(G, q)
    assert len({b.side_mask for b in bonds}) == len(bonds)
    for b in bonds:
        assert q in b.side
        assert is_connected(G, b.side) and is_connected(G, b.complement)
    assert len(enumerate_cuts(G, q)) == 2 ** (G.n - 1) - 1


def test_cut_edges_direction(k3):
    # edges entering u1 from {u2, u3}: e2 (u2 -> u1) and eb3 (u3 -> u1)
    assert cut_edges(k3, {0}, {1, 2}) == [1, 5]


def test_spanning_tree_counts(k3, fig12, single_edge):
    assert spanning_trees(k3, 2) == 3
    assert spanning_trees(fig12, 3) == 8
    assert spanning_trees(single_edge, 1) == 1
    with pytest.raises(ValueError):
        spanning_trees(k3, 2, mode="sample")


@pytest.mark.parametrize("name, G, q", SWEEP)
def test_trees_count_matches_enumeration(name, G, q):
    trees = enumerate_spanning_trees(G, q)
    assert len(trees) == count_spanning_trees(G)
    for T in trees:
        heads = sorted(G.head(e) for e in T.sourced_orientation)
        assert heads == [v for v in range(G.n) if v != q]


def test_two_connected(k3):
    path = make_graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert is_two_connected(k3)
    assert not is_two_connected(path)


def test_json_roundtrip(fig12):
    import json
    assert parse_graph(json.dumps(fig12.to_json())) == fig12
