"""From an indefinite theta series back to a universal Massey system.

Pipeline: rescale ``(a, b, c)`` so that ``b > a`` and ``b > c``; read off a
rational degree triple; pick ``N`` so that ``N^2`` times the triple is integral
and the two lattice inclusions hold; transport ``f`` to a tensor on index space;
verify the Massey equations and the series identity.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from .geometry import (
    DegreeTriple,
    QuadForm,
    ZERO_PARAMS,
    ab_matrices,
    delta_plane_period,
    gamma_lattice,
    lambda_lattice,
    necessary_condition,
    phi,
    quad_form_of,
)
from .indeftheta import CosetFunction2, _apply2, check_f_condition, theta_indef
from .lattice import Lattice
from .massey import MasseyTensor, mp_coefficient, verify_double_products
from .numeric import Cyclo, RatLike, as_rat
from .qseries import QSeries, SeriesBuilder


class PreconditionError(ValueError):
    pass


class ScaleNotFound(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def rescale_form(q: QuadForm) -> Tuple[Fraction, Fraction, QuadForm]:
    """Return ``(x, y, Q')`` with ``Q' = (x^2 a, x y b, y^2 c)`` and ``b' > a'``, ``b' > c'``."""
    if q.b > q.a and q.b > q.c:
        return Fraction(1), Fraction(1), q
    t = (q.c / q.b + q.b / q.a) / 2
    x, y = Fraction(t.numerator), Fraction(t.denominator)
    return x, y, QuadForm(x * x * q.a, x * y * q.b, y * y * q.c)


def degrees_from_form(q: QuadForm) -> DegreeTriple:
    """``d1 = D/(b-c)``, ``d2 = D/(b-a)``, ``d = d1 d2 / b`` (possibly non-integral)."""
    if not (q.b > q.a and q.b > q.c):
        raise PreconditionError("degrees_from_form needs b > a and b > c")
    dd = q.disc
    d1 = dd / (q.b - q.c)
    d2 = dd / (q.b - q.a)
    return DegreeTriple(d1, d2, d1 * d2 / q.b)


def forced_base(t: DegreeTriple) -> int:
    """Least ``N0`` with ``N0^2 d1, N0^2 d2, N0^2 d`` integral; every valid ``N`` is a multiple."""
    den = 1
    for x in t.as_tuple():
        den = den * x.denominator // gcd(den, x.denominator)
    n0 = 1
    for p, e in factorint(den).items():
        n0 *= p ** ((e + 1) // 2)
    return n0


def _scale_conditions(t: DegreeTriple, f: CosetFunction2, n: int) -> Tuple[Optional[str], Optional[DegreeTriple]]:
    tn = t.scaled(n * n)
    if not tn.is_integral:
        return "integrality", None
    if not necessary_condition(tn):
        return "necessary_condition", tn
    if not f.period.scale(Fraction(1, n)).contains_lattice(delta_plane_period(tn)):
        return "period_inclusion", tn
    if not gamma_lattice(tn).contains_lattice(f.support.scale(Fraction(1, n))):
        return "support_inclusion", tn
    return None, tn


def find_scale_N(t: DegreeTriple, f: CosetFunction2, cap: int = 1000) -> int:
    """Least ``N <= cap`` (a multiple of the forced base) satisfying all four conditions."""
    n0 = forced_base(t)
    last = None
    n = n0
    while n <= cap:
        failed, _ = _scale_conditions(t, f, n)
        if failed is None:
            return n
        last = (n, failed)
        n += n0
    diag = {"forced_base": n0, "cap": cap}
    if last is None:
        diag["reason"] = "forced base exceeds cap"
        raise ScaleNotFound(f"no N <= {cap}: forced base {n0} exceeds the cap", diag)
    diag.update(last_N=last[0], first_failing_condition=last[1])
    raise ScaleNotFound(f"no N <= {cap}; at N = {last[0]} the condition '{last[1]}' fails", diag)


def scale_function(f: CosetFunction2, x: RatLike, y: RatLike) -> CosetFunction2:
    """``(m, n) -> f(x m, y n)``."""
    return f.pullback_linear([[as_rat(x), 0], [0, as_rat(y)]])


def system_from_f(t: DegreeTriple, f: CosetFunction2) -> MasseyTensor:
    """The ``(phi(Delta) + dZ^3)``-periodic tensor ``c`` with ``f_c = f``.

    ``c(i, j, k) = f(p12 phi^-1(i, j, k)) / g``: each class of ``Gamma / Lambda``
    has ``g`` lifts ``l mod d0`` and the push-forward adds them up.
    """
    if not necessary_condition(t):
        raise PreconditionError(f"necessary condition fails for {t}")
    gam = gamma_lattice(t)
    for x in f.values:
        if x not in gam:
            raise PreconditionError(f"f is nonzero at {x}, outside Gamma")
    per = delta_plane_period(t)
    # f(x + g) = f(x) on the finitely many nonzero classes forces a bijection of
    # the nonzero set, hence periodicity everywhere
    for g in per.basis:
        for x, v in f.values.items():
            if f.evaluate((x[0] + g[0], x[1] + g[1])) != v:
                raise PreconditionError(f"f is not periodic under p12(Delta) + Lambda (generator {g})")
    if not check_f_condition(quad_form_of(t), f):
        raise PreconditionError("f violates the f-condition for Q_{d1,d2,d}")
    if f.is_zero():
        return MasseyTensor(t, {})

    lam = lambda_lattice(t)
    # on Gamma, f is periodic under (f.period ∩ Gamma) + p12(Delta) + Lambda, which contains Lambda
    big = (f.period & gam) + per
    classes = {big.reduce(x): v for x, v in f.values.items()}
    d0 = int(t.d0)
    sub = lam.coset_reps(big)
    e = phi(t, (0, 0, 1))
    entries: Dict[Tuple[int, int, int], Cyclo] = {}
    for x, val in classes.items():
        for s in sub:
            i0 = phi(t, (x[0] + s[0], x[1] + s[1], 0))
            # phi(y, l) = i0 + l e; scan l with integer numerators over a common denominator
            den = 1
            for c in (*i0, *e):
                den = den * c.denominator // gcd(den, c.denominator)
            a = [int(c * den) for c in i0]
            b = [int(c * den) for c in e]
            lifts = [tuple((a[r] + l * b[r]) // den for r in range(3))
                     for l in range(d0) if all((a[r] + l * b[r]) % den == 0 for r in range(3))]
            for idx in lifts:
                entries[idx] = val / len(lifts)
    return MasseyTensor(t, entries)


def antisymmetrize(q: QuadForm, support: Lattice, period: Lattice, seed: Sequence[RatLike]) -> CosetFunction2:
    """Signed orbit sum of a point mass under the group generated by ``A`` and ``B``.

    ``A`` and ``B`` must preserve both lattices.  The value at ``g x0`` is
    ``(-1)^(word length of g)``; if some odd word fixes the seed class the result is 0.
    """
    a, b = ab_matrices(q)
    for m in (a, b):
        if support.transform(m) != support or period.transform(m) != period:
            raise PreconditionError("A and B must preserve the support and period lattices")
    x0 = period.reduce((as_rat(seed[0]), as_rat(seed[1])))
    sign: Dict[Tuple[Fraction, Fraction], int] = {x0: 1}
    todo = deque([x0])
    while todo:
        x = todo.popleft()
        for m in (a, b):
            y = period.reduce(_apply2(m, x))
            s = -sign[x]
            if y not in sign:
                sign[y] = s
                todo.append(y)
            elif sign[y] != s:
                return CosetFunction2(support, period)
    return CosetFunction2(support, period, {x: Cyclo.rational(s) for x, s in sign.items()})


@dataclass
class Thm2Report:
    quad_form: QuadForm
    trunc: Fraction
    x: Fraction
    y: Fraction
    rescaled: QuadForm
    rational_degrees: DegreeTriple
    N: int
    degrees: DegreeTriple
    tensor: MasseyTensor
    massey_system: bool
    lhs: QSeries
    rhs: QSeries
    per_l_terms: List[int] = field(default_factory=list)

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs

    @property
    def passed(self) -> bool:
        return self.equality and self.massey_system

    def to_json(self):
        return {
            "rescale": {"x": self.x, "y": self.y, "form": self.rescaled.to_json()},
            "degrees": {"rational": self.rational_degrees.to_json(), "integral": self.degrees.to_json()},
            "N": self.N,
            "tensor": self.tensor.to_json(),
            "massey_system": self.massey_system,
            "equality": self.equality,
            "order": self.trunc,
            "theta": self.lhs.to_json(),
        }


def _mp_job(args):
    t, c, l, trunc = args
    return mp_coefficient(t, ZERO_PARAMS, c, l, trunc)


def thm2_pipeline(q: QuadForm, f: CosetFunction2, trunc: RatLike = 4, cap: int = 1000,
                  workers: int = 1) -> Thm2Report:
    """Construct ``c`` from ``(Q, f)`` and compare ``Theta_{Q,f}`` with ``sum_l MP(c)_l``.

    With ``workers > 1`` the per-``l`` series are computed in a process pool;
    the exact sum does not depend on the schedule.
    """
    trunc = as_rat(trunc)
    if not check_f_condition(q, f):
        raise PreconditionError("(Q, f) violates the f-condition")
    x, y, q1 = rescale_form(q)
    f1 = scale_function(f, x, y)
    t_rat = degrees_from_form(q1)
    n = find_scale_N(t_rat, f1, cap)
    t = t_rat.scaled(n * n)
    f2 = scale_function(f1, n, n)
    c = system_from_f(t, f2)
    massey = verify_double_products(t, ZERO_PARAMS, c, trunc)
    lhs = theta_indef(q, f, trunc)
    jobs = [(t, c, l, trunc) for l in range(int(t.d0))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_mp_job, jobs))
    else:
        parts = [_mp_job(j) for j in jobs]
    acc = SeriesBuilder(trunc)
    terms = []
    for s in parts:
        terms.append(len(s.terms))
        acc.add_series(s)
    return Thm2Report(q, trunc, x, y, q1, t_rat, n, t, c, massey, lhs, acc.build(), terms)
