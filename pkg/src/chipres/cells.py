"""Cell complexes from acyclic partial orientations and their cellular resolutions.

Two complexes are built for a graph ``G`` with sink ``q``:

``bounded``
    The bounded cells of the graphic arrangement sliced at ``f(q) = -c``.  A
    cell with ``k`` blocks has dimension ``k - 2``; it supports the minimal
    resolution of ``O_G^q`` (and, relabeled through ``φ``, of ``M_G^q``).

``torus``
    The Delaunay tiling of the cut lattice modulo translation.  An orbit of
    cells is represented by the unique translate whose acyclic partial
    orientation has its only source at ``q``'s block; a cell with ``k`` blocks
    has dimension ``k - 1``.  It supports the minimal resolution of ``J_G``
    (and, relabeled, of ``I_G``).

Points of the cut lattice are stored as integer potentials ``g`` on vertices
normalised by ``g(q) = 0``; the lattice point itself is ``dg``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .divisors import equivalence_and_pic
from .graph import Multigraph, enumerate_bonds, is_connected
from .ideals import Monomial, minimalize, specialize_phi
from .linalg import ChainComplexQ, homology_ranks, rank_det, rat_solve

DEFAULT_C = Fraction(1, 2)


class CellError(ValueError):
    pass


# ---------------------------------------------------------------------------
# acyclic partial orientations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class APOrientation:
    """A connected partition plus an acyclic orientation of its quotient.

    ``block_of[v]`` is the block id of ``v`` (ids ordered by smallest vertex);
    an arc ``(X, Y)`` means potentials increase from block ``X`` to ``Y``.
    """

    block_of: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]
    source_constrained: bool = False

    @property
    def nblocks(self) -> int:
        return max(self.block_of) + 1

    @property
    def blocks(self) -> tuple[frozenset[int], ...]:
        out: list[set[int]] = [set() for _ in range(self.nblocks)]
        for v, b in enumerate(self.block_of):
            out[b].add(v)
        return tuple(frozenset(b) for b in out)

    def sort_key(self) -> tuple:
        return (self.nblocks, self.block_of, tuple(sorted(self.arcs)))

    def up_edges(self, G: Multigraph) -> list[int]:
        """Oriented edges whose head lies in a higher block than their tail."""
        return [e for e in range(2 * G.m)
                if (self.block_of[G.tail(e)], self.block_of[G.head(e)]) in self.arcs]


def _set_partitions(n: int):
    """Restricted growth strings: block ids appear in order of smallest element."""
    labels = [0] * n

    def rec(i: int, nb: int):
        if i == n:
            yield tuple(labels)
            return
        for b in range(nb + 1):
            labels[i] = b
            yield from rec(i + 1, max(nb, b + 1))

    if n == 0:
        return
    labels[0] = 0
    yield from rec(1, 1)


def connected_partitions(G: Multigraph) -> list[tuple[int, ...]]:
    out = []
    for labels in _set_partitions(G.n):
        k = max(labels) + 1
        blocks = [[v for v in range(G.n) if labels[v] == b] for b in range(k)]
        if all(is_connected(G, blk) for blk in blocks):
            out.append(labels)
    return out


def quotient_edges(G: Multigraph, block_of: Sequence[int]) -> list[tuple[int, int]]:
    pairs = set()
    for a, b in G.edges:
        x, y = block_of[a], block_of[b]
        if x != y:
            pairs.add((min(x, y), max(x, y)))
    return sorted(pairs)


def _is_acyclic(k: int, arcs: Iterable[tuple[int, int]]) -> bool:
    indeg = [0] * k
    out: list[list[int]] = [[] for _ in range(k)]
    for x, y in arcs:
        indeg[y] += 1
        out[x].append(y)
    stack = [v for v in range(k) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == k


def _sources(k: int, arcs: Iterable[tuple[int, int]]) -> set[int]:
    heads = {y for _, y in arcs}
    return {v for v in range(k) if v not in heads}


def enumerate_cells(G: Multigraph, q: int, mode: str = "sourced") -> dict[int, list[APOrientation]]:
    """Acyclic partial orientations grouped by block count.

    ``sourced``: ``q``'s block is the unique source, at least two blocks.
    ``central``: every acyclic partial orientation, including the one-block one.
    """
    if mode not in ("sourced", "central"):
        raise CellError(f"unknown mode {mode!r}")
    sourced = mode == "sourced"
    out: dict[int, list[APOrientation]] = {}
    for labels in connected_partitions(G):
        k = max(labels) + 1
        if sourced and k < 2:
            continue
        qe = quotient_edges(G, labels)
        for bits in product((0, 1), repeat=len(qe)):
            arcs = frozenset((x, y) if bit == 0 else (y, x) for (x, y), bit in zip(qe, bits))
            if not _is_acyclic(k, arcs):
                continue
            if sourced and _sources(k, arcs) != {labels[q]}:
                continue
            out.setdefault(k, []).append(APOrientation(labels, arcs, sourced))
    for k in out:
        out[k].sort(key=APOrientation.sort_key)
    return dict(sorted(out.items()))


def merge_blocks(apo: APOrientation, x: int, y: int) -> APOrientation | None:
    """Contract the arc ``x -> y``; ``None`` if the quotient would get a cycle."""
    if (x, y) not in apo.arcs:
        raise CellError(f"({x}, {y}) is not an arc of the orientation")
    k = apo.nblocks
    lo, hi = min(x, y), max(x, y)
    # new ids: merged block keeps the smaller id; renumber by smallest vertex
    merged = [lo if b == hi else b for b in apo.block_of]
    order: dict[int, int] = {}
    for b in merged:
        if b not in order:
            order[b] = len(order)
    new_of = tuple(order[b] for b in merged)

    def nid(b: int) -> int:
        return order[lo if b == hi else b]

    arcs = set()
    for a, b in apo.arcs:
        na, nb = nid(a), nid(b)
        if na != nb:
            arcs.add((na, nb))
    if not _is_acyclic(k - 1, arcs):
        return None
    if any((b, a) in arcs for a, b in arcs):
        return None
    return APOrientation(new_of, frozenset(arcs), apo.source_constrained)


def codim_one_faces(apo: APOrientation) -> list[APOrientation]:
    out = []
    for x, y in sorted(apo.arcs):
        f = merge_blocks(apo, x, y)
        if f is not None and f not in out:
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# lattice geometry
# ---------------------------------------------------------------------------

Potential = tuple[int, ...]


def _bfs_order(G: Multigraph, q: int) -> list[int]:
    dist = G.bfs_distance(q)
    return sorted(range(G.n), key=lambda v: (dist[v], v))


def lattice_points(G: Multigraph, q: int, lo: Sequence, hi: Sequence) -> list[Potential]:
    """Integer potentials ``g`` (``g(q) = 0``) with ``lo[k] <= g(head) - g(tail) <= hi[k]``.

    ``lo``/``hi`` are indexed by reference edge and may be rational.
    """
    order = _bfs_order(G, q)
    pos = {v: i for i, v in enumerate(order)}
    # constraints on each vertex from edges to earlier vertices
    cons: list[list[tuple[int, int, int]]] = [[] for _ in range(G.n)]
    for k, (a, b) in enumerate(G.edges):
        # g(b) - g(a) in [lo, hi]
        if pos[a] < pos[b]:
            cons[b].append((a, +1, k))
        else:
            cons[a].append((b, -1, k))
    g = [0] * G.n
    out: list[Potential] = []

    def rec(i: int) -> None:
        if i == len(order):
            out.append(tuple(g))
            return
        v = order[i]
        low, high = -math.inf, math.inf
        for w, sgn, k in cons[v]:
            if sgn > 0:  # g(v) - g(w) in [lo, hi]
                low = max(low, g[w] + math.ceil(lo[k]))
                high = min(high, g[w] + math.floor(hi[k]))
            else:  # g(w) - g(v) in [lo, hi]
                low = max(low, g[w] - math.floor(hi[k]))
                high = min(high, g[w] - math.ceil(lo[k]))
        if low > high:
            return
        for val in range(int(low), int(high) + 1):
            g[v] = val
            rec(i + 1)
        g[v] = 0

    if G.n == 0:
        return out
    g[q] = 0
    rec(1)
    return out


def star_vertices(G: Multigraph, q: int, apo: APOrientation) -> list[Potential]:
    """Lattice points of the origin cell of ``apo``: steps in ``{0, 1}`` up every arc."""
    lo, hi = [], []
    for a, b in G.edges:
        x, y = apo.block_of[a], apo.block_of[b]
        if x == y:
            lo.append(0)
            hi.append(0)
        elif (x, y) in apo.arcs:
            lo.append(0)
            hi.append(1)
        else:
            lo.append(-1)
            hi.append(0)
    return sorted(lattice_points(G, q, lo, hi))


def upset_vertices(G: Multigraph, q: int, apo: APOrientation) -> list[Potential]:
    """The indicator potentials of up-closed block unions (including the origin).

    A subset of ``star_vertices``; the two coincide when every arc is the only
    directed path between its endpoints' blocks.
    """
    k = apo.nblocks
    out = set()
    for mask in range(1 << k):
        if any(mask >> x & 1 and not mask >> y & 1 for x, y in apo.arcs):
            continue
        chi = [mask >> apo.block_of[v] & 1 for v in range(G.n)]
        base = chi[q]
        out.add(tuple(c - base for c in chi))
    return sorted(out)


def lattice_label(G: Multigraph, g: Sequence[int]) -> Monomial:
    """Laurent monomial ``Π y_e^{(dg)(e)}`` over all oriented edges."""
    return Monomial("S", tuple(g[G.head(e)] - g[G.tail(e)] for e in range(2 * G.m)))


def principal_label(G: Multigraph, g: Sequence[int]) -> Monomial:
    """``x^{Δg}``: the image of ``lattice_label`` under ``φ``."""
    out = [0] * G.n
    for a, b in G.edges:
        d = g[a] - g[b]
        out[a] += d
        out[b] -= d
    return Monomial("R", tuple(out))


def _coords(G: Multigraph, q: int, g: Sequence) -> tuple:
    return tuple(Fraction(g[v]) - Fraction(g[q]) for v in range(G.n) if v != q)


def _reference_basis(points: Sequence[tuple]) -> tuple[tuple, list[tuple]]:
    """Lexicographically least affinely independent tuple, as ``(origin, difference vectors)``."""
    pts = sorted(points)
    base = pts[0]
    basis: list[tuple] = []
    for p in pts[1:]:
        vec = tuple(a - b for a, b in zip(p, base))
        trial = basis + [vec]
        if rank_det(trial)[0] == len(trial):
            basis = trial
    return base, basis


def _in_basis(basis: Sequence[tuple], vec: tuple) -> list[Fraction]:
    if not basis:
        return []
    cols = len(basis)
    A = [[basis[j][i] for j in range(cols)] for i in range(len(vec))]
    sol = rat_solve(A, list(vec))
    if sol is None:
        raise CellError("vector outside the affine hull of its cell")
    return sol


def _barycenter(points: Sequence[tuple]) -> tuple:
    k = len(points)
    return tuple(sum(p[i] for p in points) / k for i in range(len(points[0])))


def incidence_sign(face_basis: Sequence[tuple], cell_basis: Sequence[tuple],
                   face_points: Sequence[tuple], cell_points: Sequence[tuple]) -> int:
    """Outward normal first, then the face's own basis, compared with the cell's basis."""
    outward = tuple(a - b for a, b in zip(_barycenter(face_points), _barycenter(cell_points)))
    rows = [_in_basis(cell_basis, outward)] + [_in_basis(cell_basis, v) for v in face_basis]
    det = rank_det(rows)[1]
    if det == 0:
        raise CellError("degenerate incidence")
    return 1 if det > 0 else -1


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

@dataclass
class Cell:
    index: int
    dim: int
    apo: APOrientation | None
    points: list[tuple]  # realized vertex coordinates (potential minus potential at q)
    label: Monomial
    basis: list[tuple] = field(default_factory=list)
    lattice: list[Potential] = field(default_factory=list)  # torus: lattice vertices
    # (face index, sign, translation potential or None, coefficient m_F / m_F')
    boundary: list[tuple[int, int, Potential | None, Monomial]] = field(default_factory=list)


@dataclass
class CellComplex:
    G: Multigraph
    q: int
    kind: str
    c: Fraction
    cells: list[Cell]  # cells[0] is the base (empty cell or origin)

    def by_dim(self) -> dict[int, list[Cell]]:
        out: dict[int, list[Cell]] = {}
        for cell in self.cells[1:] if self.kind == "bounded" else self.cells:
            out.setdefault(cell.dim, []).append(cell)
        return dict(sorted(out.items()))

    def f_vector(self) -> tuple[int, ...]:
        d = self.by_dim()
        return tuple(len(d[i]) for i in sorted(d))


def _check_c(c) -> Fraction:
    c = Fraction(c)
    if not 0 < c < 1:
        raise CellError(f"c must lie strictly between 0 and 1, got {c}")
    return c


def build_complex(G: Multigraph, q: int, kind: str = "bounded", c=DEFAULT_C) -> CellComplex:
    """Build (or fetch from cache) a complex; callers must not mutate the result."""
    c = _check_c(c)
    if kind not in ("bounded", "torus"):
        raise CellError(f"unknown complex kind {kind!r}")
    return _build_cached(G, q, kind, c)


@lru_cache(maxsize=64)
def _build_cached(G: Multigraph, q: int, kind: str, c: Fraction) -> CellComplex:
    if kind == "bounded":
        return _build_bounded(G, q, c)
    if kind == "torus":
        return _build_torus(G, q, c)
    raise CellError(f"unknown complex kind {kind!r}")


def bond_point(G: Multigraph, q: int, B: frozenset[int], c: Fraction) -> tuple:
    """Where the ray of the bond ``B`` (``q ∉ B``) meets the slice, as coordinates off ``q``."""
    t = c / len(B)
    return tuple(t if v in B else Fraction(0) for v in range(G.n) if v != q)


def _build_bounded(G: Multigraph, q: int, c: Fraction) -> CellComplex:
    S_vars = 2 * G.m
    base = Cell(0, -1, None, [], Monomial.one("S", S_vars))
    cells = [base]
    index: dict[APOrientation, int] = {}
    bonds = {b.complement for b in enumerate_bonds(G, q)}
    for k, apos in enumerate_cells(G, q, "sourced").items():
        for apo in apos:
            up = set()
            for mask in range(1, 1 << apo.nblocks):
                if mask >> apo.block_of[q] & 1:
                    continue
                if any(mask >> x & 1 and not mask >> y & 1 for x, y in apo.arcs):
                    continue
                B = frozenset(v for v in range(G.n) if mask >> apo.block_of[v] & 1)
                if B in bonds:
                    up.add(B)
            vert_bonds = sorted(up, key=lambda B: sorted(B))
            pts = [bond_point(G, q, B, c) for B in vert_bonds]
            label = Monomial.one("S", S_vars)
            for B in vert_bonds:
                A = frozenset(range(G.n)) - B
                label = label.lcm(cut_generators_lead(G, A, B))
            cell = Cell(len(cells), k - 2, apo, pts, label)
            _, cell.basis = _reference_basis(pts)
            if len(cell.basis) != cell.dim:
                raise CellError(f"cell {cell.index} has the wrong dimension")
            index[apo] = cell.index
            cells.append(cell)
    for cell in cells[1:]:
        if cell.dim == 0:
            cell.boundary = [(0, 1, None, cell.label)]
            continue
        for face_apo in codim_one_faces(cell.apo):
            face = cells[index[face_apo]]
            if not set(face.points) <= set(cell.points):
                raise CellError("face relation disagrees with vertex sets")
            sign = incidence_sign(face.basis, cell.basis, face.points, cell.points)
            cell.boundary.append((face.index, sign, None, cell.label / face.label))
    return CellComplex(G, q, "bounded", c, cells)


def cut_generators_lead(G: Multigraph, A: frozenset[int], B: frozenset[int]) -> Monomial:
    """``Π y_e`` over oriented edges from ``A`` into ``B``."""
    return Monomial.from_support("S", 2 * G.m,
                                 [e for e in range(2 * G.m) if G.tail(e) in A and G.head(e) in B])


def _translate_apo(G: Multigraph, apo: APOrientation, shift: Sequence[int]) -> APOrientation:
    """The origin-star cell ``F - shift`` for a lattice vertex ``shift`` of the origin cell ``F``."""
    arcs = set()
    for x, y in apo.arcs:
        # step of the shift along this arc (constant on blocks)
        vx = next(shift[v] for v in range(G.n) if apo.block_of[v] == x)
        vy = next(shift[v] for v in range(G.n) if apo.block_of[v] == y)
        arcs.add((x, y) if vy - vx == 0 else (y, x))
    return APOrientation(apo.block_of, frozenset(arcs), False)


def _is_sourced(apo: APOrientation, q: int) -> bool:
    if apo.nblocks == 1:
        return True
    return _sources(apo.nblocks, apo.arcs) == {apo.block_of[q]}


def _add(g: Sequence[int], h: Sequence[int]) -> Potential:
    return tuple(a + b for a, b in zip(g, h))


def _sub(g: Sequence[int], h: Sequence[int]) -> Potential:
    return tuple(a - b for a, b in zip(g, h))


def _build_torus(G: Multigraph, q: int, c: Fraction) -> CellComplex:
    S_vars = 2 * G.m
    origin_apo = APOrientation((0,) * G.n, frozenset(), True)
    reps = [origin_apo]
    for k, apos in enumerate_cells(G, q, "sourced").items():
        reps.extend(apos)
    cells: list[Cell] = []
    index: dict[APOrientation, int] = {}
    for apo in reps:
        lat = star_vertices(G, q, apo)
        pts = [_coords(G, q, g) for g in lat]
        label = Monomial.one("S", S_vars)
        for g in lat:
            label = label.lcm(lattice_label(G, g))
        cell = Cell(len(cells), apo.nblocks - 1, apo, pts, label, lattice=lat)
        _, cell.basis = _reference_basis(pts)
        if len(cell.basis) != cell.dim:
            raise CellError(f"torus cell {cell.index} has the wrong dimension")
        index[apo] = cell.index
        cells.append(cell)
    for cell in cells:
        if cell.dim == 0:
            continue
        seen: set[frozenset] = set()
        for v in cell.lattice:
            local = _translate_apo(G, cell.apo, v)
            for face_local in codim_one_faces(local):
                # the face, placed in the cover: local origin cell moved back by v
                face_lat = [_add(g, v) for g in star_vertices(G, q, face_local)]
                key = frozenset(face_lat)
                if key in seen:
                    continue
                seen.add(key)
                rep_idx, shift = _locate_orbit(G, q, face_local, v, index)
                rep = cells[rep_idx]
                if frozenset(_add(g, shift) for g in rep.lattice) != key:
                    raise CellError("orbit representative does not match its translate")
                face_pts = [_coords(G, q, g) for g in face_lat]
                sign = incidence_sign(rep.basis, cell.basis, face_pts, cell.points)
                face_label = lattice_label(G, shift) * rep.label
                coeff = cell.label / face_label
                if coeff.is_laurent:
                    raise CellError("face label does not divide cell label")
                cell.boundary.append((rep_idx, sign, shift, coeff))
    return CellComplex(G, q, "torus", c, cells)


def _locate_orbit(G: Multigraph, q: int, face_local: APOrientation, v: Potential,
                  index: dict) -> tuple[int, Potential]:
    """Find the sourced representative ``R`` and shift ``s`` with ``R + s`` = ``face_local + v``."""
    for w in star_vertices(G, q, face_local):
        cand = _translate_apo(G, face_local, w)
        if _is_sourced(cand, q):
            key = APOrientation(cand.block_of, cand.arcs, True)
            return index[key], _add(w, v)
    raise CellError("no sourced translate found")


# ---------------------------------------------------------------------------
# chain complexes of free modules
# ---------------------------------------------------------------------------

Poly = dict  # Monomial -> int


@dataclass
class LabeledChainComplex:
    """Free resolution of ``ring / ideal``.

    ``labels[h]`` lists the generator degrees in homological degree ``h``
    (``h = 0`` is the ring itself); ``diffs[h]`` (for ``h >= 1``) maps each
    generator of degree ``h`` to ``{index in degree h-1: polynomial}``.
    """

    ideal: str
    ring: str
    nvars: int
    labels: list[list[Monomial]]
    diffs: list[list[dict[int, Poly]]]
    cell_ids: list[list[int]]

    @property
    def length(self) -> int:
        return len(self.labels) - 1

    def ranks(self) -> list[int]:
        return [len(x) for x in self.labels]


def _levels(cx: CellComplex) -> list[list[Cell]]:
    """Group cells by homological degree (base cell at 0)."""
    shift = 1 if cx.kind == "bounded" else 0
    out: dict[int, list[Cell]] = {}
    for cell in cx.cells:
        out.setdefault(cell.dim + shift, []).append(cell)
    return [out[h] for h in sorted(out)]


def chain_complex(cx: CellComplex, ideal: str | None = None) -> LabeledChainComplex:
    levels = _levels(cx)
    pos = {cell.index: i for lvl in levels for i, cell in enumerate(lvl)}
    labels = [[cell.label for cell in lvl] for lvl in levels]
    diffs: list[list[dict[int, Poly]]] = [[]]
    for lvl in levels[1:]:
        cols = []
        for cell in lvl:
            entry: dict[int, Poly] = {}
            for face, sign, _, coeff in cell.boundary:
                poly = entry.setdefault(pos[face], {})
                poly[coeff] = poly.get(coeff, 0) + sign
                if poly[coeff] == 0:
                    del poly[coeff]
            cols.append({k: v for k, v in entry.items() if v})
        diffs.append(cols)
    name = ideal or ("OG" if cx.kind == "bounded" else "JG")
    return LabeledChainComplex(name, "S", 2 * cx.G.m, labels, diffs,
                               [[cell.index for cell in lvl] for lvl in levels])


def relabel_phi(G: Multigraph, C: LabeledChainComplex, ideal: str) -> LabeledChainComplex:
    labels = [[specialize_phi(G, m) for m in lvl] for lvl in C.labels]
    diffs: list[list[dict[int, Poly]]] = [[]]
    for lvl in C.diffs[1:]:
        cols = []
        for col in lvl:
            new_col = {}
            for row, poly in col.items():
                out: Poly = {}
                for mono, coef in poly.items():
                    img = specialize_phi(G, mono)
                    out[img] = out.get(img, 0) + coef
                out = {k: v for k, v in out.items() if v}
                if out:
                    new_col[row] = out
            cols.append(new_col)
        diffs.append(cols)
    return LabeledChainComplex(ideal, "R", G.n, labels, diffs, C.cell_ids)


def resolution(G: Multigraph, q: int, ideal: str, c=DEFAULT_C) -> LabeledChainComplex:
    """Minimal free resolution of ``ring / ideal`` for one of ``IG, MG, JG, OG``.

    Results are cached; copy before modifying.
    """
    return _resolution_cached(G, q, ideal, _check_c(c))


@lru_cache(maxsize=64)
def _resolution_cached(G: Multigraph, q: int, ideal: str, c: Fraction) -> LabeledChainComplex:
    if ideal in ("OG", "MG"):
        C = chain_complex(build_complex(G, q, "bounded", c), "OG")
    elif ideal in ("JG", "IG"):
        C = chain_complex(build_complex(G, q, "torus", c), "JG")
    else:
        raise CellError(f"unknown ideal {ideal!r}")
    if ideal in ("MG", "IG"):
        return relabel_phi(G, C, ideal)
    return C


def betti_table(C: LabeledChainComplex) -> dict[tuple[int, int], int]:
    """``β_{i,j}`` of the ideal: generators in homological degree ``i + 1`` of total degree ``j``."""
    out: dict[tuple[int, int], int] = {}
    for h, lvl in enumerate(C.labels[1:], start=1):
        for mono in lvl:
            key = (h - 1, mono.degree)
            out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def betti_totals(table: dict[tuple[int, int], int]) -> tuple[int, ...]:
    if not table:
        return ()
    top = max(i for i, _ in table)
    return tuple(sum(v for (i, _), v in table.items() if i == k) for k in range(top + 1))


def graph_betti_table(G: Multigraph, q: int) -> dict[tuple[int, int], int]:
    return betti_table(resolution(G, q, "OG"))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class Report:
    check: str
    ok: bool
    detail: str = ""
    skipped: bool = False  # the check did not apply; ``ok`` is then True

    def __bool__(self) -> bool:
        return self.ok


def _poly_mul_mono(poly: Poly, mono: Monomial) -> Poly:
    return {k * mono: v for k, v in poly.items()}


def _compose(low: list[dict[int, Poly]], high: list[dict[int, Poly]]) -> list[dict[int, Poly]]:
    out = []
    for col in high:
        acc: dict[int, Poly] = {}
        for mid, p in col.items():
            for row, r in low[mid].items():
                tgt = acc.setdefault(row, {})
                for m1, c1 in p.items():
                    for m2, c2 in r.items():
                        key = m1 * m2
                        tgt[key] = tgt.get(key, 0) + c1 * c2
        out.append({row: {k: v for k, v in poly.items() if v} for row, poly in acc.items()})
    return out


def check_d2zero(C: LabeledChainComplex) -> Report:
    for h in range(2, len(C.diffs)):
        comp = _compose(C.diffs[h - 1], C.diffs[h])
        for j, col in enumerate(comp):
            for row, poly in col.items():
                if poly:
                    return Report("d2zero", False,
                                  f"degree {h} generator {j} hits degree {h - 2} generator {row}")
    return Report("d2zero", True)


def check_minimal(C: LabeledChainComplex) -> Report:
    for h in range(1, len(C.diffs)):
        for j, col in enumerate(C.diffs[h]):
            for row, poly in col.items():
                if any(m.is_one for m in poly):
                    return Report("minimal", False,
                                  f"unit entry in degree {h} generator {j} row {row}")
    return Report("minimal", True)


def check_degree_compat(C: LabeledChainComplex, G: Multigraph | None = None) -> Report:
    """Every entry satisfies ``label(target) * entry = label(source)`` in the grading.

    Monomial ideals use the fine grading, so the products must be equal.
    Lattice ideals ``JG, IG`` are graded by divisor class, which needs ``G``.
    """
    lattice = C.ideal in ("JG", "IG")
    if lattice and G is None:
        raise CellError(f"grading check for {C.ideal} needs the graph")

    def divisor(m: Monomial) -> tuple[int, ...]:
        return (specialize_phi(G, m) if m.ring == "S" else m).exps

    for h in range(1, len(C.diffs)):
        for j, col in enumerate(C.diffs[h]):
            src = C.labels[h][j]
            for row, poly in col.items():
                for mono in poly:
                    prod = C.labels[h - 1][row] * mono
                    if lattice:
                        ok = equivalence_and_pic(G, 0, divisor(prod), divisor(src))[0]
                    else:
                        ok = prod == src
                    if not ok:
                        return Report("homogeneous", False, f"degree {h} generator {j}")
    return Report("homogeneous", True)


def label_lcm_lattice(gens: Sequence[Monomial], cap: int | None = None) -> list[Monomial]:
    """Closure of ``gens`` under lcm."""
    gens = sorted(set(gens))
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                l = a.lcm(g)
                if l not in seen:
                    seen.add(l)
                    nxt.append(l)
                    if cap is not None and len(seen) > cap:
                        raise CellError(f"lcm lattice larger than {cap}")
        frontier = nxt
    return sorted(seen)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CHIPRES_THREADS", "1")))
    except ValueError:
        return 1


def _level_signs(C: LabeledChainComplex) -> list[list[dict[int, int]]]:
    """Integer incidence numbers of the cellular differentials (labels dropped)."""
    return [[{row: sum(poly.values()) for row, poly in col.items()} for col in lvl]
            for lvl in C.diffs]


def _reduced_acyclic(dims: list[int], maps: list[list[dict[int, int]]]) -> bool:
    """``maps[i]`` sends level ``i + 1`` to level ``i``; acyclic means homology ``(1, 0, ...)``."""
    while dims and dims[-1] == 0:
        dims = dims[:-1]
        maps = maps[:len(dims) - 1]
    if not dims:
        return False
    ranks = homology_ranks(ChainComplexQ(tuple(dims), tuple(tuple(m) for m in maps)))
    return ranks[0] == 1 and not any(ranks[1:])


def _lcm_subcomplex_ok(args) -> tuple[Monomial, bool]:
    labels, signs, m = args
    keep = [[i for i, lab in enumerate(lvl) if lab.divides(m)] for lvl in labels[1:]]
    pos = [{g: i for i, g in enumerate(k)} for k in keep]
    maps = []
    for h in range(1, len(keep)):
        cols = []
        for g in keep[h]:
            cols.append({pos[h - 1][row]: c for row, c in signs[h + 1][g].items()})
        maps.append(cols)
    return m, _reduced_acyclic([len(k) for k in keep], maps)


def check_subcomplex_acyclic(C: LabeledChainComplex, cap: int | None = None) -> Report:
    """Every lcm-lattice degree of the generators sees an acyclic subcomplex."""
    if len(C.labels) < 2:
        return Report("subcomplex-acyclic", True, "zero ideal")
    lattice = label_lcm_lattice(C.labels[1], cap)
    signs = _level_signs(C)
    jobs = [(C.labels, signs, m) for m in lattice]
    workers = _threads()
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_lcm_subcomplex_ok, jobs, chunksize=32))
    else:
        results = [_lcm_subcomplex_ok(j) for j in jobs]
    for m, ok in results:
        if not ok:
            return Report("subcomplex-acyclic", False, f"label {m}")
    return Report("subcomplex-acyclic", True, f"{len(lattice)} lcm-lattice degrees")


# Exactness of the torus complexes is a statement about the periodic cover:
# for each degree b the cells F + v whose label divides b form an acyclic complex.

def _cover_points_S(G: Multigraph, q: int, b: Monomial) -> list[Potential]:
    m = G.m
    lo = [-b.exps[k + m] for k in range(m)]
    hi = [b.exps[k] for k in range(m)]
    if any(l > h for l, h in zip(lo, hi)):
        return []
    return lattice_points(G, q, lo, hi)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _cover_points_R(G: Multigraph, q: int, b: Monomial) -> list[Potential]:
    """Potentials ``g`` with ``Δg <= b``: enumerate ``E = b - Δg >= 0`` of degree ``deg b``."""
    from .divisors import _greens_cached
    from .graph import count_spanning_trees
    kappa = count_spanning_trees(G)
    j = _greens_cached(G, q)
    jk = [[int(j[p][u] * kappa) for u in range(G.n)] for p in range(G.n)]
    out = []
    d = sum(b.exps)
    if d < 0:
        return out
    for E in _compositions(d, G.n):
        D = [bb - e for bb, e in zip(b.exps, E)]
        g = []
        for u in range(G.n):
            s = sum(D[p] * jk[p][u] for p in range(G.n))
            if s % kappa:
                break
            g.append(s // kappa)
        else:
            out.append(tuple(g))
    return sorted(out)


def cover_subcomplex_ok(cx: CellComplex, b: Monomial, ring: str = "S") -> bool:
    """Acyclicity of the cells ``F + v`` of the periodic cover with label dividing ``b``."""
    G, q = cx.G, cx.q
    if ring == "S":
        points = _cover_points_S(G, q, b)
        rep_labels = [cell.label for cell in cx.cells]
        shift_label = lambda g: lattice_label(G, g)
    else:
        points = _cover_points_R(G, q, b)
        rep_labels = [specialize_phi(G, cell.label) for cell in cx.cells]
        shift_label = lambda g: principal_label(G, g)
    top = max(cell.dim for cell in cx.cells)
    levels: list[list[tuple[int, Potential]]] = [[] for _ in range(top + 1)]
    bound = b.exps
    reps = [(cell.index, cell.dim, rep_labels[cell.index].exps) for cell in cx.cells]
    for v in points:
        sl = shift_label(v).exps
        room = [x - y for x, y in zip(bound, sl)]
        for idx, dim, lab in reps:
            if all(x <= r for x, r in zip(lab, room)):
                levels[dim].append((idx, v))
    pos = [{key: i for i, key in enumerate(lvl)} for lvl in levels]
    maps = []
    for h in range(1, top + 1):
        cols = []
        for idx, v in levels[h]:
            col: dict[int, int] = {}
            for face, sign, shift, _ in cx.cells[idx].boundary:
                key = (face, _add(shift, v))
                r = pos[h - 1].get(key)
                if r is None:
                    raise CellError("cover subcomplex is not closed under faces")
                col[r] = col.get(r, 0) + sign
            cols.append({k: c for k, c in col.items() if c})
        maps.append(cols)
    return _reduced_acyclic([len(l) for l in levels], maps)


def torus_check_degrees(cx: CellComplex, ring: str = "S", pairs: bool = True) -> list[Monomial]:
    """Cell labels of every orbit, plus lcms of pairs of generator (edge) labels."""
    G = cx.G
    labels = [cell.label if ring == "S" else specialize_phi(G, cell.label) for cell in cx.cells]
    out = set(labels)
    if pairs:
        gens = [lab for cell, lab in zip(cx.cells, labels) if cell.dim == 1]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                out.add(gens[i].lcm(gens[j]))
    return sorted(out)


def _cover_job(args) -> tuple[Monomial, bool]:
    cx, b, ring = args
    return b, cover_subcomplex_ok(cx, b, ring)


def check_cover_acyclic(cx: CellComplex, ring: str = "S", pairs: bool = True) -> Report:
    if len(cx.cells) == 1:
        return Report("subcomplex-acyclic", True, "zero ideal")
    degrees = torus_check_degrees(cx, ring, pairs)
    jobs = [(cx, b, ring) for b in degrees]
    workers = _threads()
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cover_job, jobs, chunksize=16))
    else:
        results = [_cover_job(j) for j in jobs]
    for b, ok in results:
        if not ok:
            return Report("subcomplex-acyclic", False, f"cover degree {b}")
    return Report("subcomplex-acyclic", True, f"{len(degrees)} cover degrees")


def window_bounds(G: Multigraph, q: int, point: Sequence[Fraction]) -> tuple[list[int], list[int]]:
    """``⌊ζ_e⌋`` and ``⌈ζ_e⌉`` of a potential (coordinates off ``q``) on each reference edge."""
    full = []
    it = iter(point)
    for v in range(G.n):
        full.append(Fraction(0) if v == q else next(it))
    lo, hi = [], []
    for a, b in G.edges:
        z = full[b] - full[a]
        lo.append(math.floor(z))
        hi.append(math.ceil(z))
    return lo, hi


def _in_window(G: Multigraph, q: int, lo, hi, point: Sequence[Fraction]) -> bool:
    l2, h2 = window_bounds(G, q, point)
    full = []
    it = iter(point)
    for v in range(G.n):
        full.append(Fraction(0) if v == q else next(it))
    return all(lo[k] <= full[b] - full[a] <= hi[k] for k, (a, b) in enumerate(G.edges))


def check_window(cx: CellComplex) -> Report:
    """Each realized cell equals (or lies in) the polytope cut out by its interior point's window."""
    G, q = cx.G, cx.q
    if cx.kind == "torus":
        for cell in cx.cells:
            lo, hi = window_bounds(G, q, _barycenter(cell.points))
            window = set(lattice_points(G, q, lo, hi))
            if window != set(cell.lattice):
                return Report("window", False, f"torus cell {cell.index}: vertex set differs")
        return Report("window", True, f"{len(cx.cells)} cells")
    torus_like = {}
    for cell in cx.cells[1:]:
        lat = star_vertices(G, q, cell.apo)
        pts = [_coords(G, q, g) for g in lat]
        lo, hi = window_bounds(G, q, _barycenter(pts))
        if set(lattice_points(G, q, lo, hi)) != set(lat):
            return Report("window", False, f"ambient cell of {cell.index} is not a window polytope")
        for p in cell.points:
            if not _in_window(G, q, lo, hi, p) or sum(p) != cx.c:
                return Report("window", False, f"vertex of cell {cell.index} escapes its window")
        torus_like[cell.index] = len(lat)
    return Report("window", True, f"{len(cx.cells) - 1} cells")


def check_betti_equal(G: Multigraph, q: int, c=DEFAULT_C) -> Report:
    tables = {name: betti_table(resolution(G, q, name, c)) for name in ("OG", "JG", "MG", "IG")}
    ref = tables["OG"]
    for name, tab in tables.items():
        if tab != ref:
            return Report("betti-equal", False, f"{name} table {tab} differs from OG {ref}")
    return Report("betti-equal", True, str(betti_totals(ref)))


CHECKS = ("d2zero", "subcomplex-acyclic", "minimal", "betti-equal", "window")


def verify(G: Multigraph, q: int, check: str, c=DEFAULT_C, pairs: bool = True) -> list[Report]:
    """Run one named check on every complex it applies to."""
    if check == "betti-equal":
        return [check_betti_equal(G, q, c)]
    if check == "window":
        out = []
        for kind in ("bounded", "torus"):
            r = check_window(build_complex(G, q, kind, c))
            out.append(Report(f"window[{kind}]", r.ok, r.detail))
        return out
    out = []
    for ideal in ("OG", "MG", "JG", "IG"):
        C = resolution(G, q, ideal, c)
        if check == "d2zero":
            r = check_d2zero(C)
        elif check == "minimal":
            r = check_minimal(C)
        elif check == "subcomplex-acyclic":
            if ideal in ("OG", "MG"):
                r = check_subcomplex_acyclic(C)
            else:
                cx = build_complex(G, q, "torus", c)
                r = check_cover_acyclic(cx, "S" if ideal == "JG" else "R", pairs)
        else:
            raise CellError(f"unknown check {check!r}")
        out.append(Report(f"{check}[{ideal}]", r.ok, r.detail))
    return out


# ---------------------------------------------------------------------------
# Alexander duality
# ---------------------------------------------------------------------------

def alexander_dual_from_complex(G: Multigraph, q: int, c=DEFAULT_C) -> list[Monomial]:
    """Relabel the ``M_G^q`` complex by ``x^{a+1} / m_F`` on the cells below ``a``.

    ``a`` is the degree vector off ``q``; the generators come from the
    top-dimensional cells of that subcomplex.
    """
    C = resolution(G, q, "MG", c)
    a = [G.degrees[v] if v != q else 0 for v in range(G.n)]
    amono = Monomial("R", tuple(a))
    below = [(h, m) for h, lvl in enumerate(C.labels) if h >= 1 for m in lvl if m.divides(amono)]
    if not below:
        return []
    top = max(h for h, _ in below)
    gens = []
    for h, m in below:
        if h == top:
            gens.append(Monomial("R", tuple(0 if v == q else a[v] + 1 - m.exps[v]
                                            for v in range(G.n))))
    return minimalize(gens)
