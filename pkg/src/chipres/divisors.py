"""Divisor arithmetic on a graph, from Green's functions to q-reduction.

Divisors and vertex functionals are plain lists indexed by vertex position;
edge functionals are lists indexed by oriented edge (see ``graph``).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .graph import (Multigraph, apply_laplacian, count_spanning_trees, enumerate_bonds,
                    is_two_connected, laplacian)
from .linalg import rat_solve, smith_normal_form


class DivisorError(ValueError):
    pass


def degree(D: Sequence[int]) -> int:
    return sum(D)


@lru_cache(maxsize=256)
def _greens_cached(G: Multigraph, q: int) -> tuple[tuple[Fraction, ...], ...]:
    n = G.n
    others = [v for v in range(n) if v != q]
    Lq = laplacian(G, reduced_at=q)
    rows = []
    for p in range(n):
        if p == q:
            rows.append(tuple(Fraction(0) for _ in range(n)))
            continue
        rhs = [int(v == p) for v in others]
        sol = rat_solve(Lq, rhs)
        full = [Fraction(0)] * n
        for v, x in zip(others, sol):
            full[v] = x
        rows.append(tuple(full))
    return tuple(rows)


def greens_matrix(G: Multigraph, q: int) -> list[list[Fraction]]:
    """``j_q(p, v)``: the potential at ``v`` for unit current from ``p`` to a grounded ``q``."""
    return [list(r) for r in _greens_cached(G, q)]


def energy_pairing(G: Multigraph, q: int, D1: Sequence[int], D2: Sequence[int]) -> Fraction:
    if sum(D1) != 0 or sum(D2) != 0:
        raise DivisorError("energy pairing needs degree-zero divisors")
    j = _greens_cached(G, q)
    return sum((D1[u] * j[u][v] * D2[v] for u in range(G.n) for v in range(G.n)
                if D1[u] and D2[v]), Fraction(0))


def bq_theta(G: Multigraph, q: int) -> tuple[list[Fraction], list[int], list[int]]:
    """Return ``(b_q, θ_q, λ_q)``.

    ``θ_q`` is ``κ(G)·b_q`` divided by the gcd of its entries together with
    ``κ(G)``; ``λ_q(e) = θ_q(head(e))``.
    """
    j = _greens_cached(G, q)
    b = [sum((j[p][v] for p in range(G.n)), Fraction(0)) for v in range(G.n)]
    kappa = count_spanning_trees(G)
    scaled = [x * kappa for x in b]
    if any(x.denominator != 1 for x in scaled):
        raise ArithmeticError("κ·b_q is not integral")
    ints = [int(x) for x in scaled]
    g = kappa
    for x in ints:
        g = gcd(g, x)
    theta = [x // g for x in ints]
    lam = [theta[G.head(e)] for e in range(2 * G.m)]
    return b, theta, lam


def pairing(f: Sequence, D: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(f, D)), Fraction(0))


def edge_boundary(G: Multigraph, sigma: Sequence) -> list:
    """``(∂σ)(v) = Σ_{head(e)=v} σ(e) − Σ_{tail(e)=v} σ(e)`` over all oriented edges."""
    out = [0] * G.n
    for e in range(2 * G.m):
        out[G.head(e)] += sigma[e]
        out[G.tail(e)] -= sigma[e]
    return out


def cone_membership(G: Multigraph, q: int, which: str, fnl: Sequence) -> bool:
    """Does the weight ``fnl`` select the sink-side leading terms?

    ``which='M'`` takes a vertex functional (weight on the toppling ideal),
    ``which='O'`` an edge functional (weight on the Lawrence ideal).  On
    2-connected graphs the pointwise test is used; otherwise the sum over each
    bond side not containing ``q``.
    """
    if which in ("M", "M-cone"):
        gamma = apply_laplacian(G, list(fnl))
    elif which in ("O", "O-cone"):
        gamma = edge_boundary(G, list(fnl))
    else:
        raise ValueError(f"unknown cone {which!r}")
    if is_two_connected(G):
        return all(gamma[p] > 0 for p in range(G.n) if p != q)
    return bond_sum_test(G, q, gamma)


def bond_sum_test(G: Multigraph, q: int, gamma: Sequence) -> bool:
    return all(sum(gamma[v] for v in b.complement) > 0 for b in enumerate_bonds(G, q))


def fire(G: Multigraph, D: list[int], subset) -> list[int]:
    """Fire every vertex of ``subset`` once: ``D − Δ(χ_subset)``."""
    chi = [0] * G.n
    for v in subset:
        chi[v] = 1
    lap = apply_laplacian(G, chi)
    return [d - x for d, x in zip(D, lap)]


def burn(G: Multigraph, q: int, D: Sequence[int]) -> set[int]:
    """Dhar's burning from ``q``; returns the unburnt vertices."""
    burnt = {q}
    unburnt = set(range(G.n)) - burnt
    changed = True
    while changed:
        changed = False
        for v in sorted(unburnt):
            threats = sum(1 for w in G.adjacency[v] if w in burnt)
            if threats > D[v]:
                burnt.add(v)
                unburnt.discard(v)
                changed = True
    return unburnt


def is_q_reduced(G: Multigraph, q: int, D: Sequence[int]) -> bool:
    if any(D[v] < 0 for v in range(G.n) if v != q):
        return False
    return not burn(G, q, D)


def q_reduce(G: Multigraph, q: int, D: Sequence[int]) -> list[int]:
    """The unique ``q``-reduced divisor linearly equivalent to ``D``."""
    D = list(D)
    deficit = max([-D[v] for v in range(G.n) if v != q] + [0])
    if deficit:
        # Δ(κ·b_q) is κ at every vertex other than q
        _, theta, _ = bq_theta(G, q)
        lap = apply_laplacian(G, theta)
        step = lap[next(v for v in range(G.n) if v != q)]
        t = -(-deficit // step)
        D = [d + t * x for d, x in zip(D, lap)]
    while True:
        unburnt = burn(G, q, D)
        if not unburnt:
            return D
        D = fire(G, D, unburnt)


def equivalence_and_pic(G: Multigraph, q: int, D1: Sequence[int],
                        D2: Sequence[int]) -> tuple[bool, list[int]]:
    Lq = laplacian(G, reduced_at=q)
    invariants = [d for d in smith_normal_form(Lq) if d != 1]
    if sum(D1) != sum(D2):
        return False, invariants
    diff = [a - b for a, b in zip(D1, D2)]
    rhs = [diff[v] for v in range(G.n) if v != q]
    sol = rat_solve(Lq, rhs) if rhs else []
    equivalent = sol is not None and all(x.denominator == 1 for x in sol)
    return equivalent, invariants


def parse_divisor(G: Multigraph, text: str) -> list[int]:
    """``"u1:2,u3:-1"`` to a coefficient list."""
    D = [0] * G.n
    text = text.strip()
    if not text:
        return D
    for part in text.split(","):
        if ":" not in part:
            raise DivisorError(f"malformed divisor term {part!r}")
        name, coeff = part.split(":", 1)
        try:
            D[G.index(name.strip())] += int(coeff)
        except ValueError as exc:
            raise DivisorError(str(exc)) from None
    return D


def format_divisor(G: Multigraph, D: Sequence[int]) -> str:
    return ",".join(f"{G.vertices[v]}:{c}" for v, c in enumerate(D) if c)
