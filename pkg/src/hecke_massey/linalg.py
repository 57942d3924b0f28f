"""Exact Gauss-Jordan elimination over any Python field type.

Entries may be ``fractions.Fraction`` or :class:`hecke_massey.numeric.Cyclo`;
the only operations used are ``+ - * /`` and comparison with ``0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

Row = List[Any]


def rref(rows: Sequence[Sequence[Any]], ncols: int) -> Tuple[List[Row], List[int]]:
    """Return ``(reduced_rows, pivot_columns)`` of the row-reduced echelon form.

    Zero rows are dropped, so ``len(reduced_rows) == rank``.
    """
    work = [list(r) for r in rows if any(x != 0 for x in r)]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        piv = None
        for i in range(r, len(work)):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        inv = 1 / prow[col] if not isinstance(prow[col], int) else Fraction(1, prow[col])
        if prow[col] != 1:
            prow = [x * inv for x in prow]
            work[r] = prow
        nz = [c for c in range(col, ncols) if prow[c] != 0]
        for i in range(len(work)):
            if i == r:
                continue
            f = work[i][col]
            if f == 0:
                continue
            row = work[i]
            for c in nz:
                row[c] = row[c] - f * prow[c]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def rank(rows: Sequence[Sequence[Any]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Any]], ncols: int, one: Any = Fraction(1)) -> List[Row]:
    """Basis of ``{x : rows . x = 0}`` read off the RREF (one vector per free column).

    The basis is canonical for a fixed column order: the vector for free
    column ``f`` has a ``1`` at ``f`` and zeros at every other free column.
    """
    red, pivots = rref(rows, ncols)
    zero = one - one
    pivset = set(pivots)
    basis: List[Row] = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [zero] * ncols
        vec[free] = one
        for row, p in zip(red, pivots):
            if row[free] != 0:
                vec[p] = -row[free]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> Optional[Row]:
    """One solution of ``rows . x = rhs`` or ``None`` if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    zero = Fraction(0)
    x: Row = [zero] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def same_span(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]], ncols: int) -> bool:
    """True iff the row spaces of ``a`` and ``b`` coincide."""
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb == rank(list(a) + list(b), ncols)


def in_span(vec: Sequence[Any], basis: Sequence[Sequence[Any]], ncols: int) -> bool:
    return rank(list(basis), ncols) == rank(list(basis) + [vec], ncols)


# small dense matrix helpers (lists of rows)


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> List[Row]:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def mat_vec(a: Sequence[Sequence[Any]], v: Sequence[Any]) -> Row:
    return [sum((a[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(a))]


def mat_inv(a: Sequence[Sequence[Any]]) -> List[Row]:
    n = len(a)
    aug = [list(map(Fraction, a[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence[Any]]) -> Fraction:
    n = len(a)
    m = [list(map(Fraction, r)) for r in a]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return d


def identity(n: int) -> List[Row]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
