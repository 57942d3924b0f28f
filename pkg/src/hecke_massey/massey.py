"""Universal Massey systems and their triple-product coefficients.

A tensor ``c = (c_ijk)`` on ``Z/d1 x Z/d x Z/d2`` is read as a ``dZ^3``-periodic
function on ``Q^3`` that vanishes off ``Z^3``.  The Massey condition is the
vanishing of both families of double-product contractions; the coefficient
``MP(c)_l`` is a signed lattice sum over the slice ``Gamma(l)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .geometry import (
    DegreeTriple,
    ModuliParams,
    ZERO_PARAMS,
    apply,
    delta_generators,
    gamma_lattice,
    gamma_slice,
    lambda0_progressions,
    lambda_lattice,
    necessary_condition,
    periodicity_shifts,
    phi,
    quad_form_of,
    sign_operators,
    slice_period,
    x_shifts,
    I1_set,
    I2_set,
)
from .indeftheta import (
    CLOSED_PATTERN,
    OPEN_PATTERN,
    CosetFunction2,
    DegenerateShiftError,
    check_f_condition,
    region_sum,
    theta_coset_series,
    theta_indef,
)
from .lattice import Lattice, integral_kernel
from .linalg import nullspace
from .numeric import Cyclo, RatLike, as_rat, exp2pi
from .qseries import QSeries, SeriesBuilder

Index = Tuple[int, int, int]
ZERO = Cyclo.rational(0)
PERIOD_INDEX_CAP = 10 ** 6


class MasseyTensor:
    """Sparse tensor on ``Z/d1 x Z/d x Z/d2`` with Cyclo entries."""

    __slots__ = ("degrees", "entries")

    def __init__(self, degrees: DegreeTriple, entries: Mapping[Sequence[int], object] = ()):
        d1, d2, d = degrees.ints()
        table: Dict[Index, Cyclo] = {}
        for idx, v in dict(entries).items():
            i, j, k = (int(t) for t in idx)
            key = (i % d1, j % d, k % d2)
            v = Cyclo.coerce(v)
            table[key] = table[key] + v if key in table else v
        self.degrees = degrees
        self.entries = {k: v for k, v in table.items() if not v.is_zero()}

    @classmethod
    def from_vector(cls, degrees: DegreeTriple, vec: Sequence[object]) -> "MasseyTensor":
        return cls(degrees, {idx: v for idx, v in zip(degrees.box(), vec) if v != 0})

    def to_vector(self) -> List[Cyclo]:
        return [self.entries.get(idx, ZERO) for idx in self.degrees.box()]

    def __call__(self, x: Sequence[RatLike]) -> Cyclo:
        """Extension by zero to ``Q^3``."""
        x = [as_rat(t) for t in x]
        if any(t.denominator != 1 for t in x):
            return ZERO
        d1, d2, d = self.degrees.ints()
        return self.entries.get((int(x[0]) % d1, int(x[1]) % d, int(x[2]) % d2), ZERO)

    def at(self, i: int, j: int, k: int) -> Cyclo:
        d1, d2, d = self.degrees.ints()
        return self.entries.get((i % d1, j % d, k % d2), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "MasseyTensor") -> "MasseyTensor":
        _same(self, other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return MasseyTensor(self.degrees, out)

    def __neg__(self) -> "MasseyTensor":
        return MasseyTensor(self.degrees, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "MasseyTensor") -> "MasseyTensor":
        return self + (-other)

    def scale(self, s) -> "MasseyTensor":
        return MasseyTensor(self.degrees, {k: v * s for k, v in self.entries.items()})

    def with_entry(self, idx: Index, value) -> "MasseyTensor":
        out = dict(self.entries)
        d1, d2, d = self.degrees.ints()
        out[(idx[0] % d1, idx[1] % d, idx[2] % d2)] = Cyclo.coerce(value)
        return MasseyTensor(self.degrees, out)

    def is_periodic_under(self, shift: Sequence[RatLike]) -> bool:
        s = [as_rat(t) for t in shift]
        if any(t.denominator != 1 for t in s):
            return self.is_zero()
        return all(self.at(i + int(s[0]), j + int(s[1]), k + int(s[2])) == v
                   for (i, j, k), v in self.entries.items()) and all(
            self.at(i - int(s[0]), j - int(s[1]), k - int(s[2])) == v for (i, j, k), v in self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, MasseyTensor):
            return NotImplemented
        return self.degrees == other.degrees and self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        return f"MasseyTensor({self.degrees}, nonzero={len(self.entries)})"

    def to_json(self):
        from .jsonio import cyclo_to_json

        return {
            "degrees": self.degrees.to_json(),
            "entries": [[list(k), cyclo_to_json(self.entries[k])] for k in sorted(self.entries)],
        }


def _same(a: MasseyTensor, b: MasseyTensor) -> None:
    if a.degrees != b.degrees:
        raise ValueError("tensors have different degree triples")


@dataclass
class MasseyKernelReport:
    degrees: DegreeTriple
    basis: List[MasseyTensor]
    method: str  # "EXACT" or "TRUNCATED"
    solve_order: Optional[Fraction] = None
    verified_order: Optional[Fraction] = None
    params: ModuliParams = ZERO_PARAMS
    notes: List[str] = field(default_factory=list)
    rejected: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self):
        return {
            "degrees": self.degrees.to_json(),
            "params": self.params.to_json(),
            "method": self.method if self.solve_order is None else f"TRUNCATED({self.solve_order})",
            "solve_order": self.solve_order,
            "verified_order": self.verified_order,
            "dimension": self.dimension,
            "rejected": self.rejected,
            "notes": list(self.notes),
            "basis": [b.to_json() for b in self.basis],
        }


# ---------------------------------------------------------------------------
# exact solver (zero parameters)


def _column_map(t: DegreeTriple) -> Dict[Index, int]:
    return {idx: n for n, idx in enumerate(t.box())}


def _reduce(t: DegreeTriple, x: Sequence[int]) -> Index:
    d1, d2, d = t.ints()
    return (int(x[0]) % d1, int(x[1]) % d, int(x[2]) % d2)


def _is_int(x: Sequence[Fraction]) -> bool:
    return all(as_rat(c).denominator == 1 for c in x)


def massey_equations(t: DegreeTriple, delta_periodic: bool = False) -> List[List[Fraction]]:
    """Rows of the reduced linear system (periodicity, sign relations, optional Delta-periodicity)."""
    cols = _column_map(t)
    n = len(cols)
    rows: List[List[Fraction]] = []
    one = Fraction(1)

    def add(pairs):
        row = [Fraction(0)] * n
        for col, coef in pairs:
            row[col] += coef
        if any(row):
            rows.append(row)

    shifts = list(periodicity_shifts(t))
    if delta_periodic:
        shifts += [phi(t, z) for z in delta_generators(t)]
    for s in shifts:
        s = [int(c) for c in s]
        for idx in t.box():
            y = (idx[0] + s[0], idx[1] + s[1], idx[2] + s[2])
            add([(cols[idx], one), (cols[_reduce(t, y)], -one)])

    period = t.period_lattice()
    z3 = Lattice.standard(3)
    for op in sign_operators(t):
        lat = period & period.transform(op)
        for x in lat.coset_reps(z3):
            y = apply(op, x)
            src = cols[_reduce(t, x)]
            if _is_int(y):
                add([(src, one), (cols[_reduce(t, y)], one)])
            else:
                add([(src, one)])
    return rows


def universal_massey_kernel_exact(t: DegreeTriple, delta_periodic: bool = False) -> MasseyKernelReport:
    """Basis of solutions of the reduced system at ``v = w = 0``."""
    if not necessary_condition(t):
        return MasseyKernelReport(t, [], "EXACT", notes=["necessary condition fails"])
    rows = massey_equations(t, delta_periodic)
    basis = nullspace(rows, len(_column_map(t)))
    notes = ["delta-periodic"] if delta_periodic else []
    return MasseyKernelReport(t, [MasseyTensor.from_vector(t, v) for v in basis], "EXACT", notes=notes)


# ---------------------------------------------------------------------------
# double products for general parameters


@lru_cache(maxsize=64)
def _double_thetas(t: DegreeTriple, params: ModuliParams, upto: Fraction):
    """``theta_{I1(u,i,j)}(p1 x1, p1 tau)`` and ``theta_{I2(v,j,k)}(p2 x2, p2 tau)`` tables."""
    d1, d2, d = t.ints()
    (r1, s1), (r2, s2) = x_shifts(t, params)
    th1 = {}
    for u in range(d - d1):
        for i in range(d1):
            for j in range(d):
                prog = I1_set(t, u, i, j)
                if not prog.is_empty:
                    s = theta_coset_series(prog, r1, s1, t.p1, upto)
                    if not s.is_zero():
                        th1[(u, i, j)] = s
    th2 = {}
    for v in range(d - d2):
        for j in range(d):
            for k in range(d2):
                prog = I2_set(t, v, j, k)
                if not prog.is_empty:
                    s = theta_coset_series(prog, r2, s2, t.p2, upto)
                    if not s.is_zero():
                        th2[(v, j, k)] = s
    return th1, th2


def _u_values(t: DegreeTriple, i: int, j: int, modulus: int, g: int) -> range:
    """Residues ``u`` mod ``modulus`` with ``u = i + j (mod g)``: exactly those with nonempty I1/I2."""
    return range((i + j) % g, modulus, g)


def double_product_series(t: DegreeTriple, params: ModuliParams, c: MasseyTensor, upto: RatLike):
    """All contractions ``sum_ij c_ijk theta_I1(u,i,j)`` and ``sum_jk c_ijk theta_I2(v,j,k)``.

    Returns two dicts keyed by ``(k, u)`` and ``(i, v)``.  Only nonzero entries
    of ``c`` and the residues ``u`` with nonempty ``I1`` are visited, so the cost
    scales with the support of ``c`` rather than with ``d1 d d2 (d - d1)``.
    """
    upto = as_rat(upto)
    d1, d2, d = t.ints()
    (r1, s1), (r2, s2) = x_shifts(t, params)
    g1, g2 = t.g1, t.g2
    acc1: Dict[Tuple[int, int], SeriesBuilder] = {}
    acc2: Dict[Tuple[int, int], SeriesBuilder] = {}
    cache1: Dict[Tuple[int, int, int], QSeries] = {}
    cache2: Dict[Tuple[int, int, int], QSeries] = {}
    for (i, j, k), val in c.entries.items():
        for u in _u_values(t, i, j, d - d1, g1):
            key = (u, i, j)
            if key not in cache1:
                cache1[key] = theta_coset_series(I1_set(t, u, i, j), r1, s1, t.p1, upto)
            acc1.setdefault((k, u), SeriesBuilder(upto)).add_series(cache1[key], val)
        for v in _u_values(t, j, k, d - d2, g2):
            key = (v, j, k)
            if key not in cache2:
                cache2[key] = theta_coset_series(I2_set(t, v, j, k), r2, s2, t.p2, upto)
            acc2.setdefault((i, v), SeriesBuilder(upto)).add_series(cache2[key], val)
    return ({k: b.build() for k, b in acc1.items()}, {k: b.build() for k, b in acc2.items()})


def verify_double_products(t: DegreeTriple, params: ModuliParams, c: MasseyTensor, upto: RatLike) -> bool:
    """True iff every double-product contraction of ``c`` vanishes below ``upto``."""
    upto = as_rat(upto)
    if upto <= 0:
        raise ValueError("upto must be positive")
    if c.is_zero():
        return True
    one, two = double_product_series(t, params, c, upto)
    return all(s.is_zero() for s in one.values()) and all(s.is_zero() for s in two.values())


def truncated_equations(t: DegreeTriple, params: ModuliParams, order: RatLike):
    """Rows: one per (family, residue, exponent) with entries over the box columns."""
    order = as_rat(order)
    cols = _column_map(t)
    n = len(cols)
    d1, d2, d = t.ints()
    th1, th2 = _double_thetas(t, params, order)
    rows: Dict[Tuple, Dict[int, Cyclo]] = {}
    for (u, i, j), s in th1.items():
        for k in range(d2):
            col = cols[(i, j, k)]
            for e, coef in s.terms.items():
                row = rows.setdefault((1, k, u, e), {})
                row[col] = row[col] + coef if col in row else coef
    for (v, j, k), s in th2.items():
        for i in range(d1):
            col = cols[(i, j, k)]
            for e, coef in s.terms.items():
                row = rows.setdefault((2, i, v, e), {})
                row[col] = row[col] + coef if col in row else coef
    rational = all(c.is_rational() for r in rows.values() for c in r.values())
    zero = Fraction(0) if rational else ZERO
    dense = []
    for key in sorted(rows, key=lambda k: (k[0], k[1], k[2], k[3])):
        r = [zero] * n
        for col, coef in rows[key].items():
            r[col] = coef.to_rational() if rational else coef
        dense.append(r)
    return dense, rational


def universal_massey_kernel_truncated(
    t: DegreeTriple, params: ModuliParams, solve_order: RatLike = 4, verify_order: RatLike = 8
) -> MasseyKernelReport:
    """Nullspace of the q-coefficients below ``solve_order``, re-verified to ``verify_order``."""
    solve_order, verify_order = as_rat(solve_order), as_rat(verify_order)
    if not (verify_order >= solve_order > 0):
        raise ValueError("need verify_order >= solve_order > 0")
    rows, rational = truncated_equations(t, params, solve_order)
    n = t.ints()[0] * t.ints()[1] * t.ints()[2]
    basis = nullspace(rows, n, Fraction(1) if rational else Cyclo.rational(1))
    kept, rejected = [], 0
    for vec in basis:
        tensor = MasseyTensor.from_vector(t, vec)
        if verify_double_products(t, params, tensor, verify_order):
            kept.append(tensor)
        else:
            rejected += 1
    notes = [] if necessary_condition(t) else ["necessary condition fails"]
    if rejected:
        notes.append(f"{rejected} solve-order vector(s) failed verification at {verify_order}")
    return MasseyKernelReport(t, kept, "TRUNCATED", solve_order, verify_order, params, notes, rejected)


# ---------------------------------------------------------------------------
# triple products and Massey coefficients


def _bq(t: DegreeTriple):
    q = quad_form_of(t)
    return q, q.bilinear


def _axis_hits_zero(point, lattice: Lattice, axis: int) -> bool:
    proj = Lattice([[b[axis]] for b in lattice.basis])
    return (-point[axis],) in proj


def _pattern_sum(t, params, coset, value, trunc, pattern):
    """Sum over ``lam`` in a coset; works in ``x = lam + v`` so ``Q(x)/2`` bounds the box."""
    q, bq = _bq(t)
    v, w = params.v, params.w
    qv2 = q(v) / 2
    point, lat = coset
    xoff = (point[0] + v[0], point[1] + v[1])
    if pattern == "CLOSED":
        regions = CLOSED_PATTERN(v)
    elif pattern == "OPEN":
        if _axis_hits_zero(xoff, lat, 0) or _axis_hits_zero(xoff, lat, 1):
            raise DegenerateShiftError("v is not generic for this coset: a point lies on a cone boundary")
        regions = OPEN_PATTERN((Fraction(0), Fraction(0)))
    else:
        raise ValueError("pattern must be OPEN or CLOSED")

    def val(x):
        lam = (x[0] - v[0], x[1] - v[1])
        base = value(lam)
        if not base:
            return base
        return base * exp2pi(bq(lam, w)) if (w[0] or w[1]) else base

    return region_sum(q, lat, xoff, val, regions, trunc + qv2, exponent=lambda x: q(x) / 2 - qv2, trunc=trunc)


def triple_theta(
    t: DegreeTriple, params: ModuliParams, i: int, j: int, k: int, l: int, trunc: RatLike, pattern: str = "CLOSED"
) -> QSeries:
    """``Theta_ijkl``: sign-weighted sum of ``q^(Q(lam)/2 + lam.v) e^(2 pi i lam.w)`` over ``Lambda^0(i,j,k,l)``."""
    trunc = as_rat(trunc)
    if trunc <= 0:
        raise ValueError("truncation must be positive")
    coset = lambda0_progressions(t, i, j, k, l)
    if coset is None:
        return QSeries.zero(trunc)
    return _pattern_sum(t, params, coset, lambda lam: Cyclo.rational(1), trunc, pattern)


def mp_coefficient(
    t: DegreeTriple, params: ModuliParams, c: MasseyTensor, l: int, trunc: RatLike, pattern: str = "CLOSED"
) -> QSeries:
    """``MP(c)_l = q^(Q(v)/2) sum_ijk c_ijk Theta_ijkl``, summed directly over ``Gamma(l)``."""
    trunc = as_rat(trunc)
    q = quad_form_of(t)
    qv2 = q(params.v) / 2
    if c.is_zero():
        return QSeries.zero(trunc)
    coset = gamma_slice(t, l)
    if coset is None:
        return QSeries.zero(trunc)

    def value(lam):
        return c(phi(t, (lam[0], lam[1], l)))

    inner = _pattern_sum(t, params, coset, value, trunc - qv2, pattern)
    return inner.shift(qv2)


def mp_coefficient_via_triples(t: DegreeTriple, params: ModuliParams, c: MasseyTensor, l: int, trunc: RatLike,
                               pattern: str = "CLOSED") -> QSeries:
    """Same as :func:`mp_coefficient` but literally as ``sum c_ijk Theta_ijkl`` (slow; a cross-check)."""
    trunc = as_rat(trunc)
    qv2 = quad_form_of(t)(params.v) / 2
    acc = SeriesBuilder(trunc - qv2)
    for (i, j, k), val in c.entries.items():
        acc.add_series(triple_theta(t, params, i, j, k, l, trunc - qv2, pattern), val)
    return acc.build().shift(qv2)


class PeriodCapError(ValueError):
    """The period of ``f_{c,l}`` has too many classes to tabulate."""


def _f_period(t: DegreeTriple, params: ModuliParams) -> Lattice:
    base = slice_period(t)
    w = params.w
    if not (w[0] or w[1]):
        return base
    q = quad_form_of(t)
    # p . w = p1 (a w1 + b w2) + p2 (b w1 + c w2)
    return integral_kernel(base, (q.a * w[0] + q.b * w[1], q.b * w[0] + q.c * w[1]))


def f_support(t: DegreeTriple, params: ModuliParams) -> Lattice:
    gam = gamma_lattice(t)
    v = params.v
    return gam if not (v[0] or v[1]) else Lattice(gam.basis + (v,))


def f_from_system(t: DegreeTriple, params: ModuliParams, c: MasseyTensor, l: int,
                  cap: int = PERIOD_INDEX_CAP) -> CosetFunction2:
    """``f_{c,l}(x) = c(phi_l(x - v)) exp(2 pi i (x - v).w)`` as a coset function."""
    support = f_support(t, params)
    period = _f_period(t, params)
    idx = period.index_in(support)
    if idx > cap:
        raise PeriodCapError(f"period index {idx} exceeds the cap {cap}")
    _, bq = _bq(t)
    v, w = params.v, params.w

    def value(x):
        lam = (x[0] - v[0], x[1] - v[1])
        base = c(phi(t, (lam[0], lam[1], l)))
        if not base or not (w[0] or w[1]):
            return base
        return base * exp2pi(bq(lam, w))

    if c.is_zero():
        return CosetFunction2(support, period)
    return CosetFunction2.tabulate(support, period, value)


def aggregate_f(t: DegreeTriple, c: MasseyTensor, period: Optional[Lattice] = None) -> CosetFunction2:
    """``f_c = sum_{l mod d0} f_{c,l}`` at zero parameters, supported on Gamma and Lambda-periodic.

    Computed as the push-forward along ``p`` of ``phi^* c``: for ``x`` in Gamma
    add ``c(phi(x, l))`` over the ``l`` mod ``d0`` with ``(x, l)`` in the lifted
    lattice.  ``period`` may enlarge the period (it is verified).
    """
    gam = gamma_lattice(t)
    lam = lambda_lattice(t)
    d0 = int(t.d0)

    def value(x):
        total = ZERO
        for l in range(d0):
            y = phi(t, (x[0], x[1], l))
            if _is_int(y):
                total = total + c(y)
        return total

    f = CosetFunction2.tabulate(gam, lam, value)
    return f.with_period(period) if period is not None else f


def sum_functions(fs: Iterable[CosetFunction2]) -> CosetFunction2:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = out + f
    return out


@dataclass
class Thm1Report:
    degrees: DegreeTriple
    params: ModuliParams
    trunc: Fraction
    per_l: List[dict]

    @property
    def passed(self) -> bool:
        return all(r["series_equal"] and r["f_condition"] for r in self.per_l)

    @property
    def failing_l(self) -> List[int]:
        return [r["l"] for r in self.per_l if not (r["series_equal"] and r["f_condition"])]

    def to_json(self):
        return {
            "degrees": self.degrees.to_json(),
            "params": self.params.to_json(),
            "trunc": self.trunc,
            "passed": self.passed,
            "per_l": self.per_l,
        }


def verify_thm1(t: DegreeTriple, params: ModuliParams, c: MasseyTensor, trunc: RatLike,
                check_massey: bool = True, cap: int = PERIOD_INDEX_CAP) -> Thm1Report:
    """Compare ``MP(c)_l`` with ``Theta_{Q, f_{c,l}}`` for every ``l`` and check the f-condition."""
    trunc = as_rat(trunc)
    q = quad_form_of(t)
    massey_ok = verify_double_products(t, params, c, trunc) if check_massey else None
    rows = []
    for l in range(int(t.d0)):
        mp = mp_coefficient(t, params, c, l, trunc)
        f = f_from_system(t, params, c, l, cap)
        th = theta_indef(q, f, trunc)
        rows.append({
            "l": l,
            "series_equal": mp == th,
            "f_condition": check_f_condition(q, f),
            "terms": len(mp.terms),
            "massey_system": massey_ok,
        })
    return Thm1Report(t, params, trunc, rows)
