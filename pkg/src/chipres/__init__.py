"""Chip-firing ideals and their minimal cellular free resolutions, checked exactly."""

from .cells import build_complex, betti_table, graph_betti_table, resolution, verify
from .divisors import bq_theta, energy_pairing, greens_matrix, q_reduce
from .graph import Multigraph, make_graph, parse_graph
from .ideals import Binomial, Monomial, cut_generators, specialize_phi

__all__ = [
    "Binomial", "Monomial", "Multigraph", "betti_table", "bq_theta", "build_complex",
    "cut_generators", "energy_pairing", "graph_betti_table", "greens_matrix", "make_graph",
    "parse_graph", "q_reduce", "resolution", "specialize_phi", "verify",
]
