"""Full-rank lattices in Q^n, integer normal forms and congruence systems.

A :class:`Lattice` is stored by a canonical basis: clear denominators with the
least common denominator ``D``, take the column Hermite normal form of the
integer generator matrix, divide by ``D`` again.  The HNF used here is upper
triangular with positive diagonal, and every entry right of a pivot reduced
into ``[0, pivot)``.  Two lattices are equal iff their canonical bases are.

Because the last coordinate only appears in the last basis vector, reducing a
point modulo the lattice is a single back-substitution, and the sublattice of
points with vanishing last coordinate is spanned by the first ``n-1`` columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .linalg import mat_inv, mat_vec
from .numeric import RatLike, as_rat, rat_str

Vec = Tuple[Fraction, ...]

__all__ = [
    "hnf",
    "snf",
    "hnf3",
    "snf3",
    "Lattice",
    "lat_member",
    "lat_sum",
    "lat_intersect",
    "lat_index",
    "coset_reps",
    "ArithProg",
    "solve_congruences",
    "integral_kernel",
]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# ---------------------------------------------------------------------------
# integer normal forms


def hnf(columns: Sequence[Sequence[int]], n: Optional[int] = None) -> List[List[int]]:
    """Upper-triangular column HNF of the lattice spanned by integer ``columns``.

    Returns ``n`` columns.  Raises ``ValueError`` if the span has rank < ``n``.
    """
    cols = [list(map(int, c)) for c in columns]
    if n is None:
        n = len(cols[0])
    active = [c for c in cols if any(c)]
    pivots: List[Optional[List[int]]] = [None] * n
    for r in range(n - 1, -1, -1):
        while True:
            nz = [c for c in active if c[r]]
            if not nz:
                raise ValueError("generators do not span a full-rank lattice")
            p = min(nz, key=lambda c: abs(c[r]))
            if len(nz) == 1:
                break
            for c in nz:
                if c is p:
                    continue
                q = c[r] // p[r]
                for i in range(r + 1):
                    c[i] -= q * p[i]
            active = [c for c in active if any(c)]
        active = [c for c in active if c is not p]
        if p[r] < 0:
            p = [-x for x in p]
        pivots[r] = p
    h = [list(c) for c in pivots]  # type: ignore[arg-type]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            q = h[j][i] // h[i][i]
            if q:
                h[j] = [a - q * b for a, b in zip(h[j], h[i])]
    return h


def snf(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Invariant factors ``d1 | d2 | ...`` of a square integer matrix (rows)."""
    m = [list(map(int, r)) for r in matrix]
    n = len(m)
    diag = []
    for t in range(n):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]]
            if not entries:
                diag.extend([0] * (n - t))
                return diag
            _, i0, j0 = min(entries)
            m[t], m[i0] = m[i0], m[t]
            for row in m:
                row[t], row[j0] = row[j0], row[t]
            p = m[t][t]
            clean = True
            for i in range(t + 1, n):
                q = m[i][t] // p
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                if m[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = m[t][j] // p
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if m[i][j] % p), None
            )
            if bad is not None:
                m[t] = [a + b for a, b in zip(m[t], m[bad])]
                continue
            diag.append(abs(p))
            break
    return diag


def hnf3(matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    """HNF of the column span of a 3x3 integer matrix, returned as rows."""
    cols = [[matrix[i][j] for i in range(3)] for j in range(3)]
    h = hnf(cols, 3)
    return [[h[j][i] for j in range(3)] for i in range(3)]


def snf3(matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    d = snf(matrix)
    return [[d[i] if i == j else 0 for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------------------
# rational lattices


def _vec(x: Iterable[RatLike]) -> Vec:
    return tuple(as_rat(t) for t in x)


class Lattice:
    """Immutable full-rank lattice in Q^n given by any spanning set of generators."""

    __slots__ = ("basis", "_inv", "_hash")

    def __init__(self, generators: Iterable[Iterable[RatLike]]):
        gens = [_vec(g) for g in generators]
        if not gens:
            raise ValueError("a lattice needs generators")
        n = len(gens[0])
        den = 1
        for g in gens:
            if len(g) != n:
                raise ValueError("generators of mixed dimension")
            for t in g:
                den = _lcm(den, t.denominator)
        ints = [[int(t * den) for t in g] for g in gens]
        h = hnf(ints, n)
        basis = tuple(tuple(Fraction(x, den) for x in col) for col in h)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_hash", hash(basis))

    def __setattr__(self, name, value):
        raise AttributeError("Lattice is immutable")

    @classmethod
    def standard(cls, n: int = 2, scale: RatLike = 1) -> "Lattice":
        s = as_rat(scale)
        return cls([[s if i == j else 0 for i in range(n)] for j in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> List[List[Fraction]]:
        """Basis as a matrix whose columns are the basis vectors."""
        n = self.dim
        return [[self.basis[j][i] for j in range(n)] for i in range(n)]

    def _inverse(self):
        if self._inv is None:
            object.__setattr__(self, "_inv", mat_inv(self.matrix()))
        return self._inv

    def covolume(self) -> Fraction:
        v = Fraction(1)
        for i, b in enumerate(self.basis):
            v *= b[i]
        return v

    def coords(self, x: Sequence[RatLike]) -> Optional[Tuple[int, ...]]:
        """Integer coordinates of ``x`` on the canonical basis, or None."""
        x = list(_vec(x))
        n = self.dim
        out = [0] * n
        for i in range(n - 1, -1, -1):
            t = x[i] / self.basis[i][i]
            if t.denominator != 1:
                return None
            t = int(t)
            out[i] = t
            if t:
                for k in range(i + 1):
                    x[k] -= t * self.basis[i][k]
        return tuple(out)

    def __contains__(self, x) -> bool:
        return self.coords(x) is not None

    def reduce(self, x: Sequence[RatLike]) -> Vec:
        """Canonical representative of ``x`` modulo the lattice (a point of the box)."""
        x = list(_vec(x))
        for i in range(self.dim - 1, -1, -1):
            t = floor(x[i] / self.basis[i][i])
            if t:
                for k in range(i + 1):
                    x[k] -= t * self.basis[i][k]
        return tuple(x)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(self.basis + other.basis)

    def __and__(self, other: "Lattice") -> "Lattice":
        return (self.dual() + other.dual()).dual()

    def dual(self) -> "Lattice":
        inv = self._inverse()
        n = self.dim
        # columns of inv^T are the rows of inv
        return Lattice([inv[i] for i in range(n)])

    def scale(self, r: RatLike) -> "Lattice":
        r = as_rat(r)
        return Lattice([[r * t for t in b] for b in self.basis])

    def transform(self, m: Sequence[Sequence[RatLike]]) -> "Lattice":
        """Image under the invertible linear map with matrix ``m`` (rows)."""
        mm = [[as_rat(t) for t in row] for row in m]
        return Lattice([mat_vec(mm, b) for b in self.basis])

    def project(self, axes: Sequence[int]) -> "Lattice":
        """Image under a coordinate projection (must stay full rank)."""
        return Lattice([[b[a] for a in axes] for b in self.basis])

    def hyperplane_section(self) -> "Lattice":
        """Points with last coordinate zero, as a lattice in Q^(n-1)."""
        n = self.dim
        return Lattice([b[: n - 1] for b in self.basis[: n - 1]])

    def last_coordinate_step(self) -> Fraction:
        """Generator of the group of last coordinates of lattice points."""
        return self.basis[-1][-1]

    def index_in(self, sup: "Lattice") -> int:
        if not sup.contains_lattice(self):
            raise ValueError("lattice is not contained in the proposed superlattice")
        r = self.covolume() / sup.covolume()
        assert r.denominator == 1
        return int(r)

    def coset_reps(self, sup: "Lattice") -> List[Vec]:
        """Canonical representatives of ``sup / self``, sorted."""
        self.index_in(sup)
        inv = sup._inverse()
        ks = [[int(t) for t in mat_vec(inv, b)] for b in self.basis]
        h = hnf(ks, self.dim)
        sm = sup.matrix()
        reps = set()
        for t in itertools.product(*(range(h[i][i]) for i in range(self.dim))):
            reps.add(self.reduce(mat_vec(sm, [Fraction(x) for x in t])))
        return sorted(reps)

    def points_in_box(self, lo: Sequence[Fraction], hi: Sequence[Fraction], offset=None):
        """All points of ``offset + lattice`` with ``lo[i] <= x[i] <= hi[i]`` (2D and 3D)."""
        n = self.dim
        off = _vec(offset) if offset is not None else (Fraction(0),) * n
        yield from self._box(n - 1, list(off), lo, hi)

    def _box(self, i, x, lo, hi):
        b = self.basis[i]
        step = b[i]
        tmin = _ceil((lo[i] - x[i]) / step)
        tmax = floor((hi[i] - x[i]) / step)
        for t in range(tmin, tmax + 1):
            y = [x[k] + t * b[k] if k <= i else x[k] for k in range(len(x))]
            if i == 0:
                yield tuple(y)
            else:
                yield from self._box(i - 1, y, lo, hi)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cols = ", ".join("(" + ", ".join(str(t) for t in b) + ")" for b in self.basis)
        return f"Lattice[{cols}]"

    def to_json(self):
        return {"basis": [[rat_str(t) for t in b] for b in self.basis]}


def _ceil(r: Fraction) -> int:
    return -floor(-r)


def lat_member(lat: Lattice, x) -> bool:
    return x in lat


def lat_sum(a: Lattice, b: Lattice) -> Lattice:
    return a + b


def lat_intersect(a: Lattice, b: Lattice) -> Lattice:
    return a & b


def lat_index(sub: Lattice, sup: Lattice) -> int:
    return sub.index_in(sup)


def coset_reps(sub: Lattice, sup: Lattice) -> List[Vec]:
    return sub.coset_reps(sup)


# ---------------------------------------------------------------------------
# arithmetic progressions in Q


@dataclass(frozen=True)
class ArithProg:
    """``{step*n + offset : n in Z}`` with ``0 <= offset < step``; ``step is None`` means empty."""

    step: Optional[Fraction] = None
    offset: Optional[Fraction] = None

    def __post_init__(self):
        if self.step is not None:
            step = as_rat(self.step)
            if step <= 0:
                raise ValueError("step must be positive")
            off = as_rat(self.offset) % step
            object.__setattr__(self, "step", step)
            object.__setattr__(self, "offset", off)

    @classmethod
    def empty(cls) -> "ArithProg":
        return cls()

    @classmethod
    def make(cls, step: RatLike, offset: RatLike) -> "ArithProg":
        step = abs(as_rat(step))
        return cls(step, as_rat(offset))

    @property
    def is_empty(self) -> bool:
        return self.step is None

    def __contains__(self, m) -> bool:
        if self.step is None:
            return False
        return ((as_rat(m) - self.offset) / self.step).denominator == 1

    def intersect(self, other: "ArithProg") -> "ArithProg":
        if self.is_empty or other.is_empty:
            return ArithProg.empty()
        den = 1
        for r in (self.step, self.offset, other.step, other.offset):
            den = _lcm(den, r.denominator)
        a, b = int(self.step * den), int(self.offset * den)
        c, d = int(other.step * den), int(other.offset * den)
        g, p, _ = _xgcd(a, c)
        if (d - b) % g:
            return ArithProg.empty()
        mod = a // g * c
        x = (b + a * ((d - b) // g * p % (c // g))) % mod
        return ArithProg(Fraction(mod, den), Fraction(x, den))

    def points(self, lo: RatLike, hi: RatLike) -> List[Fraction]:
        """Elements in the closed interval ``[lo, hi]``."""
        if self.step is None:
            return []
        lo, hi = as_rat(lo), as_rat(hi)
        n0 = _ceil((lo - self.offset) / self.step)
        n1 = floor((hi - self.offset) / self.step)
        return [self.offset + n * self.step for n in range(n0, n1 + 1)]

    def to_json(self):
        if self.step is None:
            return None
        return {"step": rat_str(self.step), "offset": rat_str(self.offset)}


def solve_congruences(conds: Iterable[Tuple[RatLike, RatLike]]) -> ArithProg:
    """Solution set of ``alpha*m = beta (mod Z)`` for all pairs; may be EMPTY."""
    result = ArithProg(Fraction(1), Fraction(0))
    first = True
    for alpha, beta in conds:
        alpha, beta = as_rat(alpha), as_rat(beta)
        if alpha == 0:
            raise ValueError("alpha must be nonzero")
        prog = ArithProg.make(1 / alpha, beta / alpha)
        result = prog if first else result.intersect(prog)
        first = False
        if result.is_empty:
            break
    return result


def integral_kernel(lat: Lattice, functional: Sequence[RatLike]) -> Lattice:
    """Sublattice ``{x in lat : functional . x in Z}`` of a rank-2 lattice."""
    if lat.dim != 2:
        raise ValueError("integral_kernel is implemented for rank-2 lattices")
    w = _vec(functional)
    alpha = [sum((b[i] * w[i] for i in range(2)), Fraction(0)) for b in lat.basis]
    den = 1
    for a in alpha:
        den = _lcm(den, a.denominator)
    a1, a2 = (int(a * den) for a in alpha)
    if den == 1:
        return lat
    g, x, y = _xgcd(a1, a2) if (a1 or a2) else (0, 0, 0)
    b0, b1 = lat.basis
    comb = lambda s, t: tuple(s * b0[i] + t * b1[i] for i in range(2))  # noqa: E731
    gens = [comb(den, 0), comb(0, den)]
    if g:
        g = abs(g)
        n = den // gcd(g, den)
        gens += [comb(a2 // g, -a1 // g), comb(n * x, n * y)]
    return Lattice(gens)
