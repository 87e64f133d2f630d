"""Exact linear algebra over the integers and rationals.

Everything here works on plain nested lists of ``int`` or ``Fraction``.  No
floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list]


def _shape(A: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A):
        raise ValueError("ragged matrix")
    return rows, cols


def _integerize_rows(A: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (row space is unchanged)."""
    out = []
    for row in A:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def bareiss_echelon(M: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form, in place.

    Returns ``(M, pivot_columns, swap_sign)``.  Every division is exact.
    """
    rows, cols = _shape(M)
    prev = 1
    r = 0
    sign = 1
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            sign = -sign
        piv = M[r][c]
        for i in range(r + 1, rows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, cols):
                row_i[j] = (piv * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        # entries left of the pivot in rows below are already zero
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots, sign


def rank_det(A: Sequence[Sequence]) -> tuple[int, Fraction | None]:
    """Rank of ``A`` and, when square, its determinant (Bareiss)."""
    rows, cols = _shape(A)
    if rows == 0 or cols == 0:
        return 0, (Fraction(1) if rows == cols else None)
    dens = []
    for row in A:
        d = 1
        for x in row:
            d = lcm(d, Fraction(x).denominator)
        dens.append(d)
    M = _integerize_rows(A)
    M, pivots, sign = bareiss_echelon(M)
    rank = len(pivots)
    if rows != cols:
        return rank, None
    if rank < rows:
        return rank, Fraction(0)
    scale = 1
    for d in dens:
        scale *= d
    return rank, Fraction(sign * M[rows - 1][cols - 1], scale)


def determinant(A: Sequence[Sequence]) -> Fraction:
    rows, cols = _shape(A)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    return rank_det(A)[1]


def rat_solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some ``x`` with ``A x = b``, or ``None`` when the system is inconsistent.

    Free variables are set to zero.
    """
    rows, cols = _shape(A)
    if len(b) != rows:
        raise ValueError(f"dimension mismatch: {rows} rows but rhs of length {len(b)}")
    aug = _integerize_rows([list(A[i]) + [b[i]] for i in range(rows)])
    M, pivots, _ = bareiss_echelon(aug)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = Fraction(M[r][cols])
        for j in range(c + 1, cols):
            if M[r][j]:
                s -= M[r][j] * x[j]
        x[c] = s / M[r][c]
    return x


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    ar, ac = _shape(A)
    br, bc = _shape(B)
    if ac != br:
        raise ValueError("dimension mismatch in product")
    return [[sum(A[i][k] * B[k][j] for k in range(ac)) for j in range(bc)] for i in range(ar)]


def mat_vec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]], with_transforms: bool = False):
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Returns the diagonal of length ``min(rows, cols)`` (trailing zeros for rank
    deficiency).  With ``with_transforms`` also returns unimodular ``U, V`` with
    ``U A V`` diagonal.
    """
    rows, cols = _shape(A)
    D = [[int(x) for x in row] for row in A]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: the pivot must divide every remaining entry
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if D[i][j] % D[t][t]), None)
                if bad is not None:
                    add_row(t, bad[0], 1)
                    done = False
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [D[i][i] for i in range(min(rows, cols))]
    if with_transforms:
        return diag, U, V
    return diag


def rank_sparse(rows: list[dict]) -> int:
    """Rank over the rationals of a sparse matrix given as ``{col: value}`` rows.

    Rows are integerized and inserted one at a time into an echelon basis
    keyed by leading column; elimination is fraction-free and each updated row
    is divided by the gcd of its entries.
    """
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        if all(type(v) is int for v in r.values()):
            row = {k: v for k, v in r.items() if v}
        else:
            vals = {k: Fraction(v) for k, v in r.items() if v}
            den = 1
            for v in vals.values():
                den = lcm(den, v.denominator)
            row = {k: int(v * den) for k, v in vals.items()}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = row
                break
            pv, a = piv[c], row[c]
            if pv != 1 and pv != -1:
                row = {k: pv * v for k, v in row.items()}
            else:
                a *= pv  # pv * pv == 1, so dividing by pv is multiplying by it
            for k, v in piv.items():
                nv = row.get(k, 0) - a * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if row:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
    return len(pivots)


@dataclass(frozen=True)
class ChainComplexQ:
    """Free modules ``C_0..C_k`` with ``boundaries[i]: C_{i+1} -> C_i``.

    ``boundaries[i]`` is sparse: a list over the basis of ``C_{i+1}`` of
    ``{row_in_C_i: coefficient}`` columns.
    """

    dims: tuple[int, ...]
    boundaries: tuple[tuple[dict[int, int], ...], ...]

    def check(self) -> None:
        if len(self.boundaries) != max(len(self.dims) - 1, 0):
            raise ValueError("need one boundary map between consecutive modules")
        for i in range(len(self.boundaries) - 1):
            low, high = self.boundaries[i], self.boundaries[i + 1]
            for col in high:
                acc: dict[int, int] = {}
                for mid, c in col.items():
                    for row, d in low[mid].items():
                        acc[row] = acc.get(row, 0) + c * d
                if any(acc.values()):
                    raise ValueError(f"boundary composition nonzero at degree {i + 2}")


def homology_ranks(C: ChainComplexQ) -> list[int]:
    """``rank H_i = dim C_i - rank D_i - rank D_{i+1}`` with ``D_0 = 0``."""
    C.check()
    ranks = [rank_sparse([dict(col) for col in b]) for b in C.boundaries]
    out = []
    for i, d in enumerate(C.dims):
        r_in = ranks[i - 1] if i >= 1 else 0
        r_out = ranks[i] if i < len(ranks) else 0
        out.append(d - r_in - r_out)
    return out
