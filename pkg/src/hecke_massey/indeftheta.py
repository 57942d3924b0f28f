"""Doubly periodic functions on Q^2 and indefinite theta series.

Every sum here is over the points of a lattice coset inside a quadrant-shaped
region where the quadratic form grows, so a finite box (computed from the
form's positive coefficients) contains every term below the truncation.  Box
bounds use floating point with a safety margin; membership and exponents are
always decided exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .geometry import QuadForm, ab_matrices
from .lattice import ArithProg, Lattice
from .numeric import Cyclo, RatLike, as_rat, exp2pi
from .qseries import QSeries, SeriesBuilder

Point = Tuple[Fraction, Fraction]
ZERO = Cyclo.rational(0)


class DegenerateShiftError(ValueError):
    """A shift or parameter puts a summation boundary through a support point."""


class CosetFunction2:
    """Function on Q^2 supported on ``support`` and periodic under ``period``.

    ``values`` maps points of ``support`` to Cyclo numbers; keys are reduced to
    canonical representatives mod ``period`` and zero values are dropped.
    """

    __slots__ = ("support", "period", "values")

    def __init__(self, support: Lattice, period: Lattice, values: Mapping[Sequence[RatLike], object] = ()):
        if support.dim != 2 or period.dim != 2:
            raise ValueError("coset functions live on Q^2")
        if not support.contains_lattice(period):
            raise ValueError("period lattice must be contained in the support lattice")
        table: Dict[Point, Cyclo] = {}
        for x, v in dict(values).items():
            x = (as_rat(x[0]), as_rat(x[1]))
            if x not in support:
                raise ValueError(f"value given at {x}, outside the support lattice")
            key = period.reduce(x)
            v = Cyclo.coerce(v)
            if key in table and table[key] != v:
                raise ValueError(f"inconsistent values at {x} modulo the period")
            table[key] = v
        self.support = support
        self.period = period
        self.values = {k: v for k, v in table.items() if not v.is_zero()}

    @classmethod
    def zero(cls, lattice: Optional[Lattice] = None) -> "CosetFunction2":
        lat = lattice if lattice is not None else Lattice.standard(2)
        return cls(lat, lat)

    @classmethod
    def tabulate(cls, support: Lattice, period: Lattice, fn: Callable[[Point], object]) -> "CosetFunction2":
        """Build from a callable evaluated once per coset of ``support / period``."""
        return cls(support, period, {x: fn(x) for x in period.coset_reps(support)})

    def __call__(self, x: Sequence[RatLike]) -> Cyclo:
        return self.evaluate(x)

    def evaluate(self, x: Sequence[RatLike]) -> Cyclo:
        x = (as_rat(x[0]), as_rat(x[1]))
        if x not in self.support:
            return ZERO
        return self.values.get(self.period.reduce(x), ZERO)

    def _fast(self, x: Point) -> Cyclo:
        # caller guarantees x in support
        return self.values.get(self.period.reduce(x), ZERO)

    def is_zero(self) -> bool:
        return not self.values

    def reps(self) -> List[Point]:
        return self.period.coset_reps(self.support)

    def index(self) -> int:
        return self.period.index_in(self.support)

    # -- algebra -----------------------------------------------------------

    def __neg__(self) -> "CosetFunction2":
        return CosetFunction2(self.support, self.period, {k: -v for k, v in self.values.items()})

    def scale(self, s) -> "CosetFunction2":
        return CosetFunction2(self.support, self.period, {k: v * s for k, v in self.values.items()})

    def __add__(self, other: "CosetFunction2") -> "CosetFunction2":
        sup = self.support + other.support
        per = self.period & other.period
        return CosetFunction2.tabulate(sup, per, lambda x: self.evaluate(x) + other.evaluate(x))

    def __sub__(self, other: "CosetFunction2") -> "CosetFunction2":
        return self + (-other)

    def pullback_linear(self, m: Sequence[Sequence[RatLike]]) -> "CosetFunction2":
        """``x -> f(M x)`` for an invertible rational 2x2 matrix ``M``."""
        mm = [[as_rat(t) for t in row] for row in m]
        det = mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0]
        if det == 0:
            raise ValueError("matrix is singular")
        inv = [[mm[1][1] / det, -mm[0][1] / det], [-mm[1][0] / det, mm[0][0] / det]]
        sup = self.support.transform(inv)
        per = self.period.transform(inv)
        return CosetFunction2.tabulate(sup, per, lambda x: self.evaluate(_apply2(mm, x)))

    def with_period(self, lattice: Lattice) -> "CosetFunction2":
        """Re-express with a larger period lattice; raises if ``f`` is not periodic under it."""
        new = self.period + lattice
        if not self.support.contains_lattice(new):
            raise ValueError("proposed period is not inside the support lattice")
        for g in lattice.basis:
            for x in self.reps():
                if self._fast((x[0] + g[0], x[1] + g[1])) != self._fast(x):
                    raise ValueError(f"function is not periodic under {g}")
        return CosetFunction2(self.support, new, {x: self._fast(x) for x in self.reps()})

    def is_periodic_under(self, g: Sequence[RatLike]) -> bool:
        g = (as_rat(g[0]), as_rat(g[1]))
        if g not in self.support:
            return self.is_zero()
        return all(self._fast((x[0] + g[0], x[1] + g[1])) == self._fast(x) for x in self.reps())

    def equals(self, other: "CosetFunction2") -> bool:
        """Pointwise equality of the two functions on all of Q^2."""
        sup = self.support + other.support
        per = self.period & other.period
        return all(self.evaluate(x) == other.evaluate(x) for x in per.coset_reps(sup))

    def __repr__(self):
        return f"CosetFunction2(support={self.support}, period={self.period}, nonzero={len(self.values)})"

    def to_json(self):
        from .jsonio import cyclo_to_json, point_to_json

        return {
            "support": self.support.to_json(),
            "period": self.period.to_json(),
            "values": [[point_to_json(k), cyclo_to_json(self.values[k])] for k in sorted(self.values)],
        }


def _apply2(m, x) -> Point:
    return (m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1])


# ---------------------------------------------------------------------------


def check_f_condition(q: QuadForm, f: CosetFunction2) -> bool:
    """``f(Ax) = f(Bx) = -f(x)`` for all x, decided on a finite quotient."""
    if f.is_zero():
        return True
    a_mat, b_mat = ab_matrices(q)
    sup = f.support + f.support.transform(a_mat) + f.support.transform(b_mat)
    per = f.period & f.period.transform(a_mat) & f.period.transform(b_mat)
    for x in per.coset_reps(sup):
        fx = f.evaluate(x)
        if f.evaluate(_apply2(a_mat, x)) != -fx or f.evaluate(_apply2(b_mat, x)) != -fx:
            return False
    return True


# -- region enumeration


def _root_bound(a: Fraction, b: Fraction, r: Fraction) -> float:
    """An upper bound (with margin) for ``y >= 0`` solving ``a y^2/2 + b y < r``, or -1 if none."""
    af, bf, rf = float(a), float(b), float(r)
    disc = bf * bf + 2 * af * rf
    if disc < 0:
        return -1.0
    y = (-bf + math.sqrt(disc)) / af
    return y * (1 + 1e-9) + 1e-9


def orthant_box(q: QuadForm, corner: Point, sense: int, limit: Fraction):
    """Box containing ``{x : sense*(x - corner) >= 0, Q(x)/2 < limit}``.

    Writing ``x = corner + sense*y`` with ``y >= 0`` gives
    ``Q(x)/2 >= a y1^2/2 + s*al*y1 + c y2^2/2 + s*be*y2 + Q(corner)/2``.
    """
    p1, p2 = corner
    al = sense * (q.a * p1 + q.b * p2)
    be = sense * (q.b * p1 + q.c * p2)
    base = limit - q(corner) / 2
    m1 = min(Fraction(0), -al * al / (2 * q.a))
    m2 = min(Fraction(0), -be * be / (2 * q.c))
    y1 = _root_bound(q.a, al, base - m2)
    y2 = _root_bound(q.c, be, base - m1)
    if y1 < 0 or y2 < 0:
        return None
    if sense > 0:
        lo = (p1, p2)
        hi = (p1 + _up(y1), p2 + _up(y2))
    else:
        lo = (p1 - _up(y1), p2 - _up(y2))
        hi = (p1, p2)
    return lo, hi


def _up(y: float) -> Fraction:
    return Fraction(y)


Region = Tuple[Point, int, bool, int]  # corner, sense, closed, sign


def region_sum(
    q: QuadForm,
    lattice: Lattice,
    offset: Sequence[Fraction],
    value: Callable[[Point], object],
    regions: Iterable[Region],
    limit: Fraction,
    exponent: Optional[Callable[[Point], Fraction]] = None,
    trunc: Optional[Fraction] = None,
) -> QSeries:
    """Signed sum of ``value(x) q^(exponent(x))`` over ``offset + lattice`` inside each region.

    ``limit`` bounds ``Q(x)/2`` for the box; by default the exponent is ``Q(x)/2``
    and the truncation equals ``limit``.
    """
    exponent = exponent or (lambda x: q(x) / 2)
    trunc = limit if trunc is None else trunc
    out = SeriesBuilder(trunc)
    off = (as_rat(offset[0]), as_rat(offset[1]))
    for corner, sense, closed, sign in regions:
        box = orthant_box(q, corner, sense, limit)
        if box is None:
            continue
        lo, hi = box
        for x in lattice.points_in_box(lo, hi, off):
            d1, d2 = (x[0] - corner[0]) * sense, (x[1] - corner[1]) * sense
            if closed:
                if d1 < 0 or d2 < 0:
                    continue
            elif d1 <= 0 or d2 <= 0:
                continue
            if q(x) / 2 >= limit:
                continue
            e = exponent(x)
            if e >= trunc:
                continue
            v = value(x)
            if v:
                out.add(e, v if sign > 0 else -v)
    return out.build()


CLOSED_PATTERN = lambda corner: [(corner, 1, True, 1), (corner, -1, False, -1)]  # noqa: E731
OPEN_PATTERN = lambda corner: [(corner, 1, False, 1), (corner, -1, False, -1)]  # noqa: E731


def theta_indef(q: QuadForm, f: CosetFunction2, trunc: RatLike) -> QSeries:
    """``(sum_{m>=0,n>=0} - sum_{m<0,n<0}) f(m,n) q^(Q(m,n)/2)`` below ``trunc``."""
    trunc = as_rat(trunc)
    if trunc <= 0:
        raise ValueError("truncation must be positive")
    if f.is_zero():
        return QSeries.zero(trunc)
    origin = (Fraction(0), Fraction(0))
    return region_sum(q, f.support, origin, f._fast, CLOSED_PATTERN(origin), trunc)


def _check_shift(f: CosetFunction2, c: Sequence[Fraction]) -> None:
    for axis in (0, 1):
        # some support point has x_axis = -c_axis iff -c_axis lies in the projection
        proj = Lattice([[b[axis]] for b in f.support.basis])
        if (-c[axis],) in proj:
            raise DegenerateShiftError(f"shift c{axis + 1} = {c[axis]} meets the support of f")


def theta_indef_shifted(q: QuadForm, f: CosetFunction2, c1: RatLike, c2: RatLike, trunc: RatLike) -> QSeries:
    """``sum_{(m+c1)(n+c2)>0} sign(m+c1) f(m,n) q^(Q(m,n)/2)`` for a shift avoiding the support."""
    c = (as_rat(c1), as_rat(c2))
    trunc = as_rat(trunc)
    _check_shift(f, c)
    if f.is_zero():
        return QSeries.zero(trunc)
    corner = (-c[0], -c[1])
    return region_sum(q, f.support, (Fraction(0), Fraction(0)), f._fast, OPEN_PATTERN(corner), trunc)


def line_points(q: QuadForm, lattice: Lattice, offset: Sequence[Fraction], axis: int, a: Fraction, limit: Fraction):
    """Points ``x`` of ``offset + lattice`` with ``x_axis = a`` (axis 1 or 2) and ``Q(x)/2 < limit``."""
    swap = axis == 1
    lat = lattice.transform([[0, 1], [1, 0]]) if swap else lattice
    off = (offset[1], offset[0]) if swap else (offset[0], offset[1])
    b0, b1 = lat.basis
    r = (a - off[1]) / b1[1]
    if r.denominator != 1:
        return []
    base = (off[0] + r * b1[0], a)
    u = (b0[0], Fraction(0))
    # Q along the line, in swapped coordinates when needed
    qq = QuadForm(q.c, q.b, q.a) if swap else q
    qa = qq(u)
    qb = qq.bilinear(base, u)
    qc = qq(base)
    # qa t^2 + 2 qb t + qc < 2 limit
    disc = float(qb) ** 2 - float(qa) * (float(qc) - 2 * float(limit))
    if disc < 0:
        return []
    s = math.sqrt(disc)
    t0 = math.floor((-float(qb) - s) / float(qa)) - 1
    t1 = math.ceil((-float(qb) + s) / float(qa)) + 1
    out = []
    for t in range(t0, t1 + 1):
        x = (base[0] + t * u[0], base[1])
        if qq(x) < 2 * limit:
            out.append((x[1], x[0]) if swap else x)
    return out


def line_sum(q: QuadForm, f: CosetFunction2, axis: int, a: RatLike, trunc: RatLike) -> QSeries:
    """Sum of ``f(x) q^(Q(x)/2)`` over the line ``{x_axis = a}`` below ``trunc``."""
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    a, trunc = as_rat(a), as_rat(trunc)
    if trunc <= 0:
        raise ValueError("truncation must be positive")
    out = SeriesBuilder(trunc)
    for x in line_points(q, f.support, (Fraction(0), Fraction(0)), axis, a, trunc):
        v = f._fast(x)
        if v:
            out.add(q(x) / 2, v)
    return out.build()


def support_lines(f: CosetFunction2, axis: int, bound: RatLike) -> List[Fraction]:
    """Values ``a`` with ``|a| <= bound`` for which the line ``x_axis = a`` meets the support.

    Every such line carries terms below any truncation (the form restricted to a
    line has negative minimum ``-D a^2 / a`` or ``-D a^2 / c``), so callers choose
    a finite window of lines explicitly.
    """
    bound = as_rat(bound)
    step = Lattice([[b[axis - 1]] for b in f.support.basis]).basis[0][0]
    n = math.floor(bound / step)
    return [step * t for t in range(-n, n + 1)]


def theta_coset_series(prog: ArithProg, rho: RatLike, sigma: RatLike, p: RatLike, trunc: RatLike) -> QSeries:
    """``theta_I(p(rho tau + sigma), p tau) = sum_{m in I} q^(p m^2/2 + p m rho) e^(2 pi i p m sigma)``."""
    rho, sigma, p, trunc = (as_rat(x) for x in (rho, sigma, p, trunc))
    if p <= 0:
        raise ValueError("p must be positive")
    out = SeriesBuilder(trunc)
    if prog.is_empty:
        return out.build()
    # p((m+rho)^2 - rho^2)/2 < trunc
    r2 = float(2 * trunc / p + rho * rho)
    if r2 < 0:
        return out.build()
    r = math.sqrt(r2) + 1
    for m in prog.points(Fraction(math.floor(-float(rho) - r)), Fraction(math.ceil(-float(rho) + r))):
        e = p * m * m / 2 + p * m * rho
        if e < trunc:
            out.add(e, exp2pi(p * m * sigma))
    return out.build()
