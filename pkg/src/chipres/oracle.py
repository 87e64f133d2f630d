"""Brute-force cross-checks that share no code path with the cellular resolutions.

* Betti numbers from the Taylor complex, split by lcm degree, and (for
  squarefree ideals) from Hochster's formula on the Stanley-Reisner complex.
* Buchberger's S-pair criterion for binomial generating sets, plus a plain
  completion used to extract initial ideals under weight orders.
* Exhaustive search for the ``b_q``-minimal divisor in a box of firing scripts.
* Alexander duality by scanning the exponent box.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .divisors import bq_theta
from .graph import Multigraph, apply_laplacian, laplacian
from .ideals import (Binomial, GeneratingSet, Monomial, cut_generators, minimalize,
                     variable_order)
from .linalg import rank_sparse, rat_solve

DEFAULT_GENERATOR_BOUND = 16


class OracleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Betti numbers
# ---------------------------------------------------------------------------

def _lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x if x > y else y for x, y in zip(a, b))


def taylor_betti(gens: Sequence[Monomial],
                 bound: int = DEFAULT_GENERATOR_BOUND) -> dict[tuple[int, int], int]:
    """``β_{i,j}`` of the ideal generated by ``gens``.

    For each lcm degree ``b`` the Taylor subsets with lcm exactly ``b`` form a
    complex of vector spaces whose homology in size ``i + 1`` is ``β_{i,b}``.
    """
    gens = minimalize(gens)
    k = len(gens)
    if k > bound:
        raise OracleError(f"{k} generators exceed the Taylor bound of {bound}")
    if k == 0:
        return {}
    exps = [g.exps for g in gens]
    lcm_of: list[tuple[int, ...]] = [()] * (1 << k)
    groups: dict[tuple[int, ...], list[int]] = {}
    for mask in range(1, 1 << k):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        lcm_of[mask] = exps[i] if not rest else _lcm(lcm_of[rest], exps[i])
        groups.setdefault(lcm_of[mask], []).append(mask)

    table: dict[tuple[int, int], int] = {}
    for b, masks in groups.items():
        by_size: dict[int, list[int]] = {}
        for mask in masks:
            by_size.setdefault(bin(mask).count("1"), []).append(mask)
        pos = {mask: i for size in by_size.values() for i, mask in enumerate(size)}
        ranks: dict[int, int] = {}
        for s, cells in by_size.items():
            if s == 1:
                ranks[s] = 0
                continue
            rows = []
            for mask in cells:
                col: dict[int, int] = {}
                bits = [j for j in range(k) if mask >> j & 1]
                for p, j in enumerate(bits):
                    face = mask ^ (1 << j)
                    if lcm_of[face] == b:
                        col[pos[face]] = (-1) ** p
                rows.append(col)
            ranks[s] = rank_sparse(rows)
        deg = sum(b)
        for s, cells in by_size.items():
            h = len(cells) - ranks[s] - ranks.get(s + 1, 0)
            if h:
                table[(s - 1, deg)] = table.get((s - 1, deg), 0) + h
    return dict(sorted(table.items()))


def _reduced_homology(faces_by_dim: dict[int, list[frozenset]]) -> dict[int, int]:
    """Reduced rational homology of a simplicial complex given by all its faces."""
    dims = sorted(faces_by_dim)
    index = {d: {f: i for i, f in enumerate(sorted(faces_by_dim[d], key=sorted))} for d in dims}
    ranks: dict[int, int] = {}
    for d in dims:
        if d - 1 not in index:
            ranks[d] = 0
            continue
        rows = []
        for f in index[d]:
            verts = sorted(f)
            rows.append({index[d - 1][f - {v}]: (-1) ** p for p, v in enumerate(verts)})
        ranks[d] = rank_sparse(rows)
    return {d: len(index[d]) - ranks[d] - ranks.get(d + 1, 0) for d in dims}


def hochster_betti(gens: Sequence[Monomial], max_support: int = 14) -> dict[tuple[int, int], int]:
    """``β_{i,σ} = dim H̃_{|σ|-i-2}(Δ|_σ)`` for a squarefree monomial ideal.

    Only supports ``σ`` that are unions of generator supports can contribute,
    so the scan runs over the lcm lattice.
    """
    gens = minimalize(gens)
    if any(a > 1 for g in gens for a in g.exps):
        raise OracleError("Hochster's formula needs a squarefree ideal")
    supports = [frozenset(g.support) for g in gens]
    lattice = set()
    for r in range(1, len(supports) + 1):
        for combo in combinations(supports, r):
            lattice.add(frozenset().union(*combo))
    table: dict[tuple[int, int], int] = {}
    for sigma in lattice:
        if len(sigma) > max_support:
            raise OracleError(f"support of size {len(sigma)} exceeds {max_support}")
        verts = sorted(sigma)
        faces: dict[int, list[frozenset]] = {-1: [frozenset()]}
        for r in range(1, len(verts) + 1):
            for combo in combinations(verts, r):
                f = frozenset(combo)
                if not any(s <= f for s in supports):
                    faces.setdefault(r - 1, []).append(f)
        hom = _reduced_homology(faces)
        for d, h in hom.items():
            i = len(sigma) - d - 2
            if h and i >= 0:
                table[(i, len(sigma))] = table.get((i, len(sigma)), 0) + h
    return dict(sorted(table.items()))


def oracle_betti(G: Multigraph, q: int, target: str = "OG",
                 bound: int = DEFAULT_GENERATOR_BOUND) -> dict[tuple[int, int], int]:
    if target not in ("OG", "MG"):
        raise OracleError(f"oracle_betti handles OG or MG, not {target!r}")
    return taylor_betti(cut_generators(G, q, target).elements, bound)


# ---------------------------------------------------------------------------
# Gröbner bases
# ---------------------------------------------------------------------------

Exps = tuple[int, ...]
Poly = dict  # Exps -> Fraction


@dataclass(frozen=True)
class TermOrder:
    """Weight order refined by graded reverse lex.

    ``ascending`` lists variables from the smallest up.  Without ``weight``
    this is plain grevlex.
    """

    ascending: tuple[int, ...]
    weight: tuple[int, ...] | None = None

    def key(self, e: Exps) -> tuple:
        w = sum(a * b for a, b in zip(self.weight, e)) if self.weight is not None else 0
        return (w, sum(e), tuple(-e[v] for v in self.ascending))


def grevlex_q_order(G: Multigraph, q: int) -> TermOrder:
    return TermOrder(tuple(variable_order(G, q)))


def weight_order(weight: Sequence[int], ascending: Sequence[int] | None = None) -> TermOrder:
    if ascending is None:
        ascending = range(len(weight))
    return TermOrder(tuple(ascending), tuple(weight))


def random_weight_order(gens: Iterable[Binomial], nvars: int, rng: random.Random,
                        attempts: int = 1000) -> TermOrder:
    """Weights drawn from ``1..100`` until no generator's two terms tie."""
    gens = list(gens)
    for _ in range(attempts):
        w = tuple(rng.randint(1, 100) for _ in range(nvars))
        if all(sum(a * b for a, b in zip(w, g.lead.exps))
               != sum(a * b for a, b in zip(w, g.trail.exps)) for g in gens):
            return weight_order(w)
    raise OracleError("could not draw a generic weight")


def _poly(elem) -> Poly:
    if isinstance(elem, Binomial):
        p: Poly = {elem.lead.exps: Fraction(1)}
        p[elem.trail.exps] = p.get(elem.trail.exps, 0) - 1
        return {k: v for k, v in p.items() if v}
    return {elem.exps: Fraction(1)}


def _lead(p: Poly, order: TermOrder) -> Exps:
    return max(p, key=order.key)


def _sub_scaled(p: Poly, c: Fraction, shift: Exps, g: Poly) -> Poly:
    out = dict(p)
    for e, v in g.items():
        t = tuple(a + b for a, b in zip(e, shift))
        nv = out.get(t, 0) - c * v
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return out


def _reduce(p: Poly, basis: Sequence[tuple[Exps, Poly]], order: TermOrder) -> Poly:
    """Top-reduce ``p`` until its leading term is divisible by no basis lead."""
    while p:
        lt = _lead(p, order)
        for lg, g in basis:
            if all(a >= b for a, b in zip(lt, lg)):
                shift = tuple(a - b for a, b in zip(lt, lg))
                p = _sub_scaled(p, p[lt] / g[lg], shift, g)
                break
        else:
            return p
    return p


def _s_poly(f: tuple[Exps, Poly], g: tuple[Exps, Poly]) -> Poly:
    (lf, pf), (lg, pg) = f, g
    l = _lcm(lf, lg)
    out: Poly = {}
    for e, v in pf.items():
        out[tuple(a + b - c for a, b, c in zip(e, l, lf))] = v / pf[lf]
    return _sub_scaled(out, 1 / pg[lg], tuple(a - b for a, b in zip(l, lg)), pg)


def _coprime(a: Exps, b: Exps) -> bool:
    return not any(x and y for x, y in zip(a, b))


def buchberger_verify(gens, order: TermOrder) -> bool:
    """True when every S-pair of ``gens`` reduces to zero under ``order``."""
    elems = gens.elements if isinstance(gens, GeneratingSet) else tuple(gens)
    basis = []
    for elem in elems:
        p = _poly(elem)
        if p:
            basis.append((_lead(p, order), p))
    for i, j in combinations(range(len(basis)), 2):
        if _coprime(basis[i][0], basis[j][0]):
            continue  # Buchberger's first criterion
        if _reduce(_s_poly(basis[i], basis[j]), basis, order):
            return False
    return True


def groebner_basis(gens, order: TermOrder) -> list[Poly]:
    """Buchberger completion (not reduced)."""
    elems = gens.elements if isinstance(gens, GeneratingSet) else tuple(gens)
    basis = [(_lead(p, order), p) for p in (_poly(e) for e in elems) if p]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        if _coprime(basis[i][0], basis[j][0]):
            continue
        r = _reduce(_s_poly(basis[i], basis[j]), basis, order)
        if r:
            basis.append((_lead(r, order), r))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    return [p for _, p in basis]


def initial_ideal(gens, weight: Sequence[int], ascending: Sequence[int] | None = None,
                  ring: str | None = None) -> list[Monomial] | None:
    """Minimal generators of ``in_w`` of the ideal, or ``None`` if it is not monomial."""
    elems = gens.elements if isinstance(gens, GeneratingSet) else tuple(gens)
    if ring is None:
        first = elems[0]
        ring = first.lead.ring if isinstance(first, Binomial) else first.ring
    order = weight_order(weight, ascending)
    leads = []
    for p in groebner_basis(elems, order):
        top = max(sum(a * b for a, b in zip(weight, e)) for e in p)
        initial = [e for e in p if sum(a * b for a, b in zip(weight, e)) == top]
        if len(initial) != 1:
            return None
        leads.append(Monomial(ring, initial[0]))
    return minimalize(leads)


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

def firing_script(G: Multigraph, q: int, D1: Sequence[int], D2: Sequence[int]) -> list[int]:
    """Integer ``f`` with ``f(q) = 0`` and ``D1 + Δf = D2``; the divisors must be equivalent."""
    others = [v for v in range(G.n) if v != q]
    rhs = [D2[v] - D1[v] for v in others]
    sol = rat_solve(laplacian(G, reduced_at=q), rhs) if others else []
    if sol is None or any(x.denominator != 1 for x in sol) or sum(D1) != sum(D2):
        raise OracleError("divisors are not linearly equivalent")
    f = [0] * G.n
    for v, x in zip(others, sol):
        f[v] = int(x)
    return f


def brute_bq_min(G: Multigraph, q: int, D: Sequence[int], radius: int) -> list[int] | None:
    """The ``b_q``-minimal divisor ``D + Δf`` effective off ``q`` with ``|f| <= radius``.

    ``f(q) = 0`` fixes the additive constant.  Returns ``None`` when no
    divisor in the box is effective off ``q``.
    """
    b, _, _ = bq_theta(G, q)
    others = [v for v in range(G.n) if v != q]
    best, best_key = None, None
    for vals in product(range(-radius, radius + 1), repeat=len(others)):
        f = [0] * G.n
        for v, x in zip(others, vals):
            f[v] = x
        lap = apply_laplacian(G, f)
        cand = [d + x for d, x in zip(D, lap)]
        if any(cand[v] < 0 for v in others):
            continue
        key = (sum((bv * c for bv, c in zip(b, cand)), Fraction(0)), cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


# ---------------------------------------------------------------------------
# Alexander duality
# ---------------------------------------------------------------------------

def brute_alexander_dual(gens: Sequence[Monomial], a: Sequence[int]) -> list[Monomial]:
    """Dual with respect to ``a``: ``x^c`` (``c <= a``) lies in it iff ``x^{a-c}`` is outside the ideal.

    An empty ``gens`` gives ``[]``: the ring is unknown, so the unit ideal
    cannot be written down.
    """
    gens = list(gens)
    if not gens:
        return []
    ring = gens[0].ring
    if any(x > y for g in gens for x, y in zip(g.exps, a)):
        raise OracleError("generators must divide x^a")
    found = []
    for c in product(*(range(x + 1) for x in a)):
        rest = tuple(x - y for x, y in zip(a, c))
        if not any(all(u <= v for u, v in zip(g.exps, rest)) for g in gens):
            found.append(Monomial(ring, c))
    return minimalize(found)
