"""Multigraphs with a reference orientation, plus the cut and tree combinatorics built on them.

Vertices and edges are identified by their position in the input.  Oriented
edges are numbered ``0..2m-1``: index ``k < m`` is edge ``k`` in its reference
direction (first listed endpoint to second) and ``k + m`` is its reverse.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import rank_det


class GraphError(ValueError):
    """Raised for malformed, disconnected or looped graph input."""


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]  # (tail, head) of the reference orientation
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.vertices) < 1:
            raise GraphError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex name")
        for k, (a, b) in enumerate(self.edges):
            if a == b:
                raise GraphError(f"edge {k} is a loop at {self.vertices[a]}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise GraphError(f"edge {k} has an endpoint out of range")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        if not is_connected(self, range(self.n)):
            raise GraphError("graph is not connected")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    # oriented edges
    def head(self, e: int) -> int:
        return self.edges[e][1] if e < self.m else self.edges[e - self.m][0]

    def tail(self, e: int) -> int:
        return self.edges[e][0] if e < self.m else self.edges[e - self.m][1]

    def reverse(self, e: int) -> int:
        return e + self.m if e < self.m else e - self.m

    def oriented_name(self, e: int) -> str:
        return f"e{e + 1}" if e < self.m else f"eb{e - self.m + 1}"

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour lists with multiplicity."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(x) for x in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def in_edges(self, v: int) -> list[int]:
        """Oriented edges with head ``v``, in increasing index order."""
        return [e for e in range(2 * self.m) if self.head(e) == v]

    def bfs_distance(self, source: int) -> list[int]:
        dist = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in self.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[self.vertices[a], self.vertices[b]] for a, b in self.edges],
        }


def make_graph(vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> Multigraph:
    idx = {v: i for i, v in enumerate(vertices)}
    pairs = []
    for a, b in edges:
        if a not in idx or b not in idx:
            missing = a if a not in idx else b
            raise GraphError(f"unknown vertex {missing!r}")
        pairs.append((idx[a], idx[b]))
    return Multigraph(tuple(vertices), tuple(pairs))


def parse_graph(text: str) -> Multigraph:
    """Parse ``{"vertices": [...], "edges": [[a, b], ...]}``.

    Edge ``k`` is oriented from its first listed endpoint to its second.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed graph file: {exc.msg}") from None
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise GraphError("graph file needs 'vertices' and 'edges'")
    vertices = [str(v) for v in data["vertices"]]
    edges = []
    for item in data["edges"]:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise GraphError(f"malformed edge {item!r}")
        edges.append((str(item[0]), str(item[1])))
    return make_graph(vertices, edges)


def is_connected(G: Multigraph, subset: Iterable[int]) -> bool:
    """True when the induced subgraph on ``subset`` is connected (and nonempty)."""
    sub = set(subset)
    if not sub:
        return False
    start = next(iter(sub))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in G.adjacency[v]:
            if w in sub and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(sub)


def laplacian(G: Multigraph, reduced_at: int | None = None) -> list[list[int]]:
    n = G.n
    L = [[0] * n for _ in range(n)]
    for a, b in G.edges:
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    if reduced_at is None:
        return L
    keep = [i for i in range(n) if i != reduced_at]
    return [[L[i][j] for j in keep] for i in keep]


def apply_laplacian(G: Multigraph, f: Sequence) -> list:
    """Return the divisor ``Δ(f)``; works for int or Fraction entries."""
    out = [0] * G.n
    for a, b in G.edges:
        diff = f[a] - f[b]
        out[a] += diff
        out[b] -= diff
    return out


@dataclass(frozen=True)
class Cut:
    """A cut given by the side ``A`` containing the sink; stored as a bitmask."""

    side_mask: int
    n: int

    @property
    def side(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if self.side_mask >> i & 1)

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if not self.side_mask >> i & 1)

    @property
    def complement_mask(self) -> int:
        return ((1 << self.n) - 1) & ~self.side_mask


def enumerate_cuts(G: Multigraph, q: int) -> list[Cut]:
    """All cuts ``A`` with ``q ∈ A ⊊ V``, ordered by the bitmask of ``A^c``."""
    full = (1 << G.n) - 1
    out = []
    for comp in range(1, full + 1):
        if comp >> q & 1:
            continue
        out.append(Cut(full & ~comp, G.n))
    return out


def enumerate_bonds(G: Multigraph, q: int) -> list[Cut]:
    """Cuts whose two sides both induce connected subgraphs."""
    return [c for c in enumerate_cuts(G, q)
            if is_connected(G, c.side) and is_connected(G, c.complement)]


def cut_edges(G: Multigraph, into: Iterable[int], out_of: Iterable[int]) -> list[int]:
    """Oriented edges ``e`` with head in ``into`` and tail in ``out_of``."""
    head_set, tail_set = set(into), set(out_of)
    return [e for e in range(2 * G.m) if G.head(e) in head_set and G.tail(e) in tail_set]


@dataclass(frozen=True)
class SpanningTree:
    edge_indices: tuple[int, ...]
    sourced_orientation: frozenset[int]  # oriented edges directed away from q


def count_spanning_trees(G: Multigraph) -> int:
    if G.n == 1:
        return 1
    _, det = rank_det(laplacian(G, reduced_at=G.n - 1))
    return int(det)


def _orient_away(G: Multigraph, tree: Sequence[int], q: int) -> frozenset[int]:
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(G.n)}
    for k in tree:
        a, b = G.edges[k]
        adj[a].append((b, k))  # traversing a -> b uses edge k as given
        adj[b].append((a, k + G.m))
    seen = {q}
    out = set()
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for w, e in adj[v]:
            if w not in seen:
                seen.add(w)
                out.add(e)
                queue.append(w)
    return frozenset(out)


def enumerate_spanning_trees(G: Multigraph, q: int) -> list[SpanningTree]:
    """Backtracking over edges in index order; each tree carries ``O_T``."""
    n, m = G.n, G.m
    out: list[SpanningTree] = []
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    chosen: list[int] = []

    def rec(k: int) -> None:
        if len(chosen) == n - 1:
            out.append(SpanningTree(tuple(chosen), _orient_away(G, chosen, q)))
            return
        if m - k < n - 1 - len(chosen):
            return
        a, b = G.edges[k]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            chosen.append(k)
            rec(k + 1)
            chosen.pop()
            parent[ra] = ra
        rec(k + 1)

    if n == 1:
        return [SpanningTree((), frozenset())]
    rec(0)
    return out


def spanning_trees(G: Multigraph, q: int, mode: str = "count"):
    if mode == "count":
        return count_spanning_trees(G)
    if mode == "enumerate":
        return enumerate_spanning_trees(G, q)
    raise ValueError(f"unknown mode {mode!r}")


def is_two_connected(G: Multigraph) -> bool:
    """No cut vertex (graphs on at most two vertices count as 2-connected)."""
    if G.n <= 2:
        return True
    return all(is_connected(G, [w for w in range(G.n) if w != v]) for v in range(G.n))
