"""Closed-form generators of the four chip-firing ideals and related combinatorics.

Ring ``R`` has one variable ``x_v`` per vertex; ring ``S`` has one variable
``y_e`` per oriented edge (``y1..ym`` for the reference directions and
``yb1..ybm`` for their reverses).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .divisors import is_q_reduced, q_reduce
from .graph import (Cut, Multigraph, count_spanning_trees, cut_edges, enumerate_bonds,
                    enumerate_cuts, enumerate_spanning_trees)
from .linalg import rank_det


class IdealError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent vector in ring ``R`` or ``S``; negative entries mark a Laurent monomial."""

    ring: str
    exps: tuple[int, ...]

    @staticmethod
    def one(ring: str, nvars: int) -> "Monomial":
        return Monomial(ring, (0,) * nvars)

    @staticmethod
    def from_support(ring: str, nvars: int, support: Iterable[int]) -> "Monomial":
        e = [0] * nvars
        for i in support:
            e[i] += 1
        return Monomial(ring, tuple(e))

    def _check(self, other: "Monomial") -> None:
        if self.ring != other.ring or len(self.exps) != len(other.exps):
            raise IdealError("ring mismatch")

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(self.ring, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(self.ring, tuple(a - b for a, b in zip(self.exps, other.exps)))

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def lcm(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(self.ring, tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def is_laurent(self) -> bool:
        return any(a < 0 for a in self.exps)

    @property
    def is_one(self) -> bool:
        return not any(self.exps)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.exps) if a)

    def var_name(self, i: int) -> str:
        if self.ring == "R":
            return f"x{i + 1}"
        m = len(self.exps) // 2
        return f"y{i + 1}" if i < m else f"yb{i - m + 1}"

    def exponent_map(self) -> dict[str, int]:
        return {self.var_name(i): a for i, a in enumerate(self.exps) if a}

    def __str__(self) -> str:
        parts = []
        for i, a in enumerate(self.exps):
            if a == 1:
                parts.append(self.var_name(i))
            elif a:
                parts.append(f"{self.var_name(i)}^{a}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class Binomial:
    lead: Monomial
    trail: Monomial

    def __str__(self) -> str:
        return f"{self.lead} - {self.trail}"


@dataclass(frozen=True)
class GeneratingSet:
    ideal: str
    elements: tuple
    minimal: bool


def x_monomial(G: Multigraph, D: Sequence[int]) -> Monomial:
    return Monomial("R", tuple(D))


def cut_divisor(G: Multigraph, A: Iterable[int], B: Iterable[int]) -> list[int]:
    """``D(A, B)``: each ``v ∈ A`` weighted by its number of neighbours in ``B``."""
    A, B = set(A), set(B)
    D = [0] * G.n
    for v in A:
        D[v] = sum(1 for w in G.adjacency[v] if w in B)
    return D


def ig_binomial(G: Multigraph, cut: Cut) -> Binomial:
    A, Ac = cut.side, cut.complement
    return Binomial(Monomial("R", tuple(cut_divisor(G, Ac, A))),
                    Monomial("R", tuple(cut_divisor(G, A, Ac))))


def jg_binomial(G: Multigraph, cut: Cut) -> Binomial:
    A, Ac = cut.side, cut.complement
    return Binomial(Monomial.from_support("S", 2 * G.m, cut_edges(G, Ac, A)),
                    Monomial.from_support("S", 2 * G.m, cut_edges(G, A, Ac)))


def cut_generators(G: Multigraph, q: int, ideal: str, minimal: bool = True) -> GeneratingSet:
    """Generators indexed by cuts ``q ∈ A ⊊ V`` (bonds only when ``minimal``)."""
    cuts = enumerate_bonds(G, q) if minimal else enumerate_cuts(G, q)
    if ideal == "IG":
        elems = tuple(ig_binomial(G, c) for c in cuts)
    elif ideal == "MG":
        elems = tuple(ig_binomial(G, c).lead for c in cuts)
    elif ideal == "JG":
        elems = tuple(jg_binomial(G, c) for c in cuts)
    elif ideal == "OG":
        elems = tuple(jg_binomial(G, c).lead for c in cuts)
    else:
        raise IdealError(f"unknown ideal {ideal!r}")
    return GeneratingSet(ideal, elems, minimal)


def variable_order(G: Multigraph, q: int) -> list[int]:
    """Vertices from the smallest variable up: ``x_q``, then by BFS distance, then index."""
    dist = G.bfs_distance(q)
    return sorted(range(G.n), key=lambda v: (dist[v], v))


def grevlex_key(ascending: Sequence[int]) -> Callable[[Monomial], tuple]:
    """Sort key for graded reverse lex with ``ascending[0]`` the smallest variable."""
    def key(mono: Monomial) -> tuple:
        return (sum(mono.exps), tuple(-mono.exps[v] for v in ascending))
    return key


def grevlex_q_less(G: Multigraph, q: int, m1: Monomial, m2: Monomial) -> bool:
    if m1.ring != "R" or m2.ring != "R":
        raise IdealError("ring mismatch: grevlex_q compares monomials in R")
    key = grevlex_key(variable_order(G, q))
    return key(m1) < key(m2)


def normal_form_IG(G: Multigraph, q: int, m: Monomial) -> Monomial:
    """Reduce ``m`` by the bond binomials until no leading term divides it."""
    gens = cut_generators(G, q, "IG").elements
    cur = m
    while True:
        for g in gens:
            if g.lead.divides(cur):
                cur = cur / g.lead * g.trail
                break
        else:
            return cur


def normal_form_via_reduction(G: Multigraph, q: int, m: Monomial) -> Monomial:
    """Standard monomial from q-reduction: ``x^{D'}`` with the sink absorbing degree."""
    D = list(m.exps)
    red = q_reduce(G, q, D)
    return Monomial("R", tuple(red))


def specialize_phi(G: Multigraph, elem):
    """Substitute ``y_e -> x_{head(e)}``."""
    if isinstance(elem, Binomial):
        return Binomial(specialize_phi(G, elem.lead), specialize_phi(G, elem.trail))
    if elem.ring != "S":
        raise IdealError("φ acts on monomials of S")
    out = [0] * G.n
    for e, a in enumerate(elem.exps):
        if a:
            out[G.head(e)] += a
    return Monomial("R", tuple(out))


def minimalize(monos: Iterable[Monomial]) -> list[Monomial]:
    """Drop monomials divisible by another one (duplicates collapse)."""
    uniq = sorted(set(monos), key=lambda x: (x.degree, x.exps))
    out: list[Monomial] = []
    for mono in uniq:
        if not any(o.divides(mono) for o in out):
            out.append(mono)
    return out


@dataclass(frozen=True)
class Facet:
    tree_edges: tuple[int, ...]
    orientation: tuple[int, ...]  # O_T, oriented edges away from q
    facet: tuple[int, ...]  # oriented edges outside O_T


def facets_and_primes(G: Multigraph, q: int) -> list[Facet]:
    """One facet ``𝔼(G) \\ O_T`` (and prime ``⟨y_e : e ∈ O_T⟩``) per spanning tree."""
    out = []
    for T in enumerate_spanning_trees(G, q):
        o = tuple(sorted(T.sourced_orientation))
        out.append(Facet(T.edge_indices, o,
                         tuple(e for e in range(2 * G.m) if e not in T.sourced_orientation)))
    return out


def in_ideal(gens: Iterable[Monomial], m: Monomial) -> bool:
    return any(g.divides(m) for g in gens)


def find_facet(G: Multigraph, q: int, m: Monomial) -> tuple[int, ...]:
    """Grow a spanning tree from ``q`` avoiding ``supp(m)``; returns ``O_T`` as a sorted tuple.

    At each step the lowest-index oriented edge leaving the current vertex set
    and not in the support is used.
    """
    if m.ring != "S":
        raise IdealError("find_facet takes a monomial of S")
    if any(a > 1 for a in m.exps):
        raise IdealError("monomial is not squarefree")
    if in_ideal(cut_generators(G, q, "OG").elements, m):
        raise IdealError("monomial lies in the ideal")
    avoid = set(m.support)
    inside = {q}
    orient = []
    while len(inside) < G.n:
        e = next((e for e in range(2 * G.m)
                  if G.tail(e) in inside and G.head(e) not in inside and e not in avoid), None)
        if e is None:  # pragma: no cover - excluded by the membership test above
            raise IdealError("no admissible edge leaves the current tree")
        orient.append(e)
        inside.add(G.head(e))
    return tuple(sorted(orient))


LinearForm = dict  # variable index -> integer coefficient


def default_distinguished(G: Multigraph) -> dict[int, int]:
    return {v: G.in_edges(v)[0] for v in range(G.n) if G.in_edges(v)}


def lsop_sets(G: Multigraph, q: int,
              distinguished: Mapping[int, int] | None = None) -> tuple[list[LinearForm], list[LinearForm]]:
    """``L`` = forms ``y_e − y_{e_v}`` over in-edges ``e ≠ e_v`` of each ``v``; ``L^(q) = L ∪ {y_{e_q}}``."""
    if distinguished is None:
        distinguished = default_distinguished(G)
    for v, e in distinguished.items():
        if G.head(e) != v:
            raise IdealError(f"distinguished edge {G.oriented_name(e)} does not point into "
                             f"{G.vertices[v]}")
    if G.m == 0:  # S has no variables, so both sets are empty
        return [], []
    L: list[LinearForm] = []
    for v in range(G.n):
        ev = distinguished[v]
        for e in G.in_edges(v):
            if e != ev:
                L.append({e: 1, ev: -1})
    return L, L + [{distinguished[q]: 1}]


def restricted_rank(forms: Sequence[LinearForm], facet: Iterable[int]) -> int:
    """Rank of the forms after setting variables outside ``facet`` to zero."""
    cols = sorted(facet)
    rows = [[f.get(c, 0) for c in cols] for f in forms]
    return rank_det(rows)[0] if rows and cols else 0


def lsop_verified(G: Multigraph, q: int, Lq: Sequence[LinearForm]) -> bool:
    return all(restricted_rank(Lq, f.facet) == len(f.facet) for f in facets_and_primes(G, q))


def form_str(G: Multigraph, form: LinearForm) -> str:
    one = Monomial.one("S", 2 * G.m)
    terms = []
    for v, c in sorted(form.items(), key=lambda t: -t[1]):
        name = one.var_name(v)
        terms.append(("+" if c > 0 else "-") + (name if abs(c) == 1 else f"{abs(c)}*{name}"))
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def degree_vector(G: Multigraph, q: int) -> list[int]:
    return [G.degrees[v] if v != q else 0 for v in range(G.n)]


def alexander_dual_gens(G: Multigraph, q: int) -> list[Monomial]:
    """Minimal generators of the Alexander dual of ``M_G^q`` with respect to the degree vector.

    Computed from the relabeled bounded complex; see
    ``cells.alexander_dual_from_complex``.
    """
    from .cells import alexander_dual_from_complex
    return alexander_dual_from_complex(G, q)


def parking_count(G: Multigraph, q: int) -> int:
    """Number of q-reduced divisors with ``0 <= D(v) < deg(v)`` off ``q``."""
    others = [v for v in range(G.n) if v != q]
    count = 0
    for vals in product(*(range(G.degrees[v]) for v in others)):
        D = [0] * G.n
        for v, c in zip(others, vals):
            D[v] = c
        if is_q_reduced(G, q, D):
            count += 1
    return count


def kappa(G: Multigraph) -> int:
    return count_spanning_trees(G)
