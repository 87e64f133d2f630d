import random
from pathlib import Path

import networkx as nx
import pytest

from chipres.graph import GraphError, Multigraph, parse_graph

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    G = parse_graph((FIXTURES / f"{name}.json").read_text())
    return G


def atlas_graphs(max_n=5):
    """Every connected simple graph on at most ``max_n`` vertices, up to isomorphism."""
    out = []
    for k, g in enumerate(nx.graph_atlas_g()):
        if g.number_of_nodes() == 0 or g.number_of_nodes() > max_n or not nx.is_connected(g):
            continue
        G = Multigraph(tuple(f"v{i}" for i in sorted(g.nodes)), tuple(sorted(g.edges)))
        out.append((f"atlas{k}", G, G.n - 1))
    return out


def random_multigraphs(count=50, seed=2024, max_n=6, max_m=9):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_n)
        m = rng.randint(n - 1, max_m)
        edges = tuple(tuple(rng.sample(range(n), 2)) for _ in range(m))
        try:
            G = Multigraph(tuple(f"v{i}" for i in range(n)), edges)
        except GraphError:
            continue
        out.append((f"rand{len(out)}", G, rng.randrange(n)))
    return out


def doubled_edge_graphs(max_n=4):
    """Each atlas graph with one of its edges doubled."""
    out = []
    for name, G, q in atlas_graphs(max_n):
        for k in range(G.m):
            H = Multigraph(G.vertices, G.edges + (G.edges[k],))
            out.append((f"{name}+e{k}", H, q))
    return out


ATLAS = atlas_graphs()
RANDOM = random_multigraphs()
SWEEP = ATLAS + RANDOM


@pytest.fixture(scope="session")
def k3():
    return load("k3")


@pytest.fixture(scope="session")
def fig12():
    return load("fig12")


@pytest.fixture(scope="session")
def single_edge():
    return load("single_edge")
