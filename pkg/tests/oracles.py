"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: direct transcriptions of the defining
formulas, brute-force enumeration, and elimination routines that share no code
with ``hecke_massey``.  Values of coset functions are read through their public
``evaluate`` method only.
"""

from __future__ import annotations

import math
from fractions import Fraction as F
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

PRIMES = (1_000_003, 998_244_353, 2_147_483_647)


# -- linear algebra ------------------------------------------------------------


def bareiss_rank(rows: Sequence[Sequence[F]]) -> int:
    """Rank by fraction-free (Bareiss) elimination after clearing denominators."""
    m = []
    for r in rows:
        den = 1
        for x in r:
            den = den * F(x).denominator // math.gcd(den, F(x).denominator)
        m.append([int(F(x) * den) for x in r])
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, n_rows):
            for j in range(col + 1, n_cols):
                m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def modular_rank(rows: Sequence[Sequence[F]], p: int) -> int:
    m = [[(F(x).numerator * pow(F(x).denominator, -1, p)) % p for x in r] for r in rows]
    if not m:
        return 0
    rank = 0
    for col in range(len(m[0])):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def checked_rank(rows: Sequence[Sequence[F]]) -> int:
    """Bareiss rank, asserted equal to the rank modulo three large primes."""
    r = bareiss_rank(rows)
    mods = {modular_rank(rows, p) for p in PRIMES}
    assert mods == {r}, (r, mods)
    return r


def sympy_hnf_columns(columns: Sequence[Sequence[int]]) -> Matrix:
    return hermite_normal_form(Matrix(columns).T)


def sympy_invariants(matrix: Sequence[Sequence[int]]) -> List[int]:
    s = smith_normal_form(Matrix(matrix), domain=ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape))]


def in_lattice(basis: Sequence[Sequence[F]], x: Sequence[F]) -> bool:
    """Solve ``sum t_i b_i = x`` over Q with sympy and test integrality."""
    m = Matrix([[F(b[r]) for b in basis] for r in range(len(x))])
    sol = m.LUsolve(Matrix([F(t) for t in x]))
    return all(v.is_integer for v in sol)


# -- the paper's maps, transcribed -----------------------------------------------


def phi_formula(d1, d2, d, lam1, lam2, l):
    d0 = d1 + d2 - d
    return (d1 * lam1 + F(d1 * l, d0), d2 * lam2 - d1 * lam1 - F(d * l, d0), -d2 * lam2 + F(d2 * l, d0))


def phi_inv_formula(d1, d2, d, i, j, k):
    d0 = d1 + d2 - d
    s = F(i + j + k, d0)
    return (F(i, d1) - s, -F(k, d2) + s, i + j + k)


def qform(d1, d2, d):
    return (F(d1 * (d - d1), d), F(d1 * d2, d), F(d2 * (d - d2), d))


def tensor_value(entries: Dict[Tuple[int, int, int], object], d1, d2, d, idx):
    if any(F(x).denominator != 1 for x in idx):
        return 0
    i, j, k = (int(x) for x in idx)
    return entries.get((i % d1, j % d, k % d2), 0)


def in_I1(d1, d2, d, u, i, j, m) -> bool:
    return (m + F(i, d1) + F(j, d)).denominator == 1 and \
        (F(d) * m / (d - d1) + F(i, d1) + F(u, d - d1)).denominator == 1


def in_I2(d1, d2, d, v, j, k, m) -> bool:
    return (m - F(j, d) - F(k, d2)).denominator == 1 and \
        (F(d) * m / (d - d2) - F(v, d - d2) - F(k, d2)).denominator == 1


def double_product_rows(d1, d2, d) -> List[List[F]]:
    """The v = w = 0 double-product equations, one row per coefficient.

    Row for (k, u, m^2): the coefficient of q^(p1 m^2/2) in
    sum_ij c_ijk theta_{I1(u,i,j)}(0, p1 tau); symmetric rows for I2.  Every
    m with |m| <= 2 (d - d1) + 2 is visited, which covers all residue classes.
    """
    cols = {idx: n for n, idx in enumerate(product(range(d1), range(d), range(d2)))}
    rows: Dict[tuple, List[F]] = {}
    for (side, other, dm, dn) in ((1, d2, d1, d), (2, d1, d2, d)):
        bound = 2 * (d - dm) + 2
        for fixed in range(other):
            for u in range(d - dm):
                for a in range(dm):
                    for b in range(d):
                        base = -F(a, d1) - F(b, d) if side == 1 else F(b, d) + F(a, d2)
                        for n in range(-bound - 1, bound + 2):
                            m = base + n
                            if abs(m) > bound:
                                continue
                            ok = in_I1(d1, d2, d, u, a, b, m) if side == 1 else in_I2(d1, d2, d, u, b, a, m)
                            if not ok:
                                continue
                            key = (side, fixed, u, m * m)
                            idx = (a, b, fixed) if side == 1 else (fixed, b, a)
                            row = rows.setdefault(key, [F(0)] * len(cols))
                            row[cols[idx]] += 1
    return [r for r in rows.values() if any(r)]


def massey_nullity(d1, d2, d) -> int:
    rows = double_product_rows(d1, d2, d)
    return d1 * d * d2 - checked_rank(rows)


# -- theta series by brute force ------------------------------------------------


def brute_theta(q: Tuple[F, F, F], value, basis: Sequence[Sequence[F]], trunc: F,
                reach: int = 0) -> Dict[F, object]:
    """``(sum_{x1,x2 >= 0} - sum_{x1,x2 < 0}) value(x) q^(Q(x)/2)`` over ``span(basis)``.

    Points are ``s b0 + t b1`` for integer ``s, t`` in a square window whose
    size comes from a crude norm estimate (plus ``reach``).
    """
    a, b, c = q
    r = math.sqrt(2 * float(trunc) / float(min(a, c))) + 1
    inv = Matrix([[F(basis[0][0]), F(basis[1][0])], [F(basis[0][1]), F(basis[1][1])]]).inv()
    norm = max(abs(float(x)) for x in inv)
    n = int(2 * r * norm) + 2 + reach
    out: Dict[F, object] = {}
    for s in range(-n, n + 1):
        for t in range(-n, n + 1):
            x1 = s * F(basis[0][0]) + t * F(basis[1][0])
            x2 = s * F(basis[0][1]) + t * F(basis[1][1])
            if x1 >= 0 and x2 >= 0:
                sign = 1
            elif x1 < 0 and x2 < 0:
                sign = -1
            else:
                continue
            e = (a * x1 * x1 + 2 * b * x1 * x2 + c * x2 * x2) / 2
            if e >= trunc:
                continue
            v = value((x1, x2))
            if v:
                out[e] = out.get(e, 0) + sign * v
    return {e: v for e, v in out.items() if v}


def brute_theta_1d(step: F, offset: F, rho: F, sigma: F, p: F, trunc: F) -> Dict[F, complex]:
    """sum_m exp(pi i p tau m^2 + 2 pi i m p (rho tau + sigma)) as complex coefficients."""
    out: Dict[F, complex] = {}
    n = int(math.sqrt(2 * float(trunc) / float(p)) / float(step)) + 3 + int(abs(float(rho)) / float(step))
    for t in range(-n - 1, n + 2):
        m = offset + t * step
        e = p * m * m / 2 + p * m * rho
        if e < trunc:
            out[e] = out.get(e, 0) + complex(math.cos(2 * math.pi * float(p * m * sigma)),
                                             math.sin(2 * math.pi * float(p * m * sigma)))
    return {e: v for e, v in out.items() if abs(v) > 1e-12}


def congruence_scan(conds: Iterable[Tuple[F, F]], lo: F, hi: F, den: int) -> List[F]:
    """All m in (1/den)Z ∩ [lo, hi) with alpha m ≡ beta mod Z for every condition."""
    conds = list(conds)
    out = []
    n = math.floor(lo * den)
    while F(n, den) < hi:
        m = F(n, den)
        if m >= lo and all((al * m - be).denominator == 1 for al, be in conds):
            out.append(m)
        n += 1
    return out


def admissible_triples(max_d: int):
    for d in range(2, max_d + 1):
        for d1 in range(1, d):
            for d2 in range(1, d):
                if d1 + d2 > d:
                    yield (d1, d2, d)
