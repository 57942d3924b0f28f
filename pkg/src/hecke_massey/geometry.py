"""Combinatorics attached to a degree triple ``(d1, d2, d)``.

Index space ``Q^3`` carries coordinates ``(i, j, k)`` for the three theta
bases; ``(lambda1, lambda2, l)`` space is where the triple products are summed.
The linear isomorphism between them is :func:`phi`.  The period lattice of
index space is ``dZ^3 = d1 Z x d Z x d2 Z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .lattice import ArithProg, Lattice, solve_congruences
from .linalg import mat_mul, mat_vec
from .numeric import RatLike, as_rat, rat_str

Vec2 = Tuple[Fraction, Fraction]
Vec3 = Tuple[Fraction, Fraction, Fraction]
Matrix = List[List[Fraction]]


class NotIntegralError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeTriple:
    """Degrees ``(d1, d2, d)`` with ``d > d1``, ``d > d2`` and ``d0 = d1 + d2 - d > 0``.

    Rational degrees are accepted (they appear when inverting an arbitrary
    quadratic form); the gcd-derived invariants need integral degrees.
    """

    d1: Fraction
    d2: Fraction
    d: Fraction

    def __post_init__(self):
        for name in ("d1", "d2", "d"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if min(self.d1, self.d2, self.d) <= 0:
            raise ValueError("degrees must be positive")
        if not (self.d > self.d1 and self.d > self.d2 and self.d0 > 0):
            raise ValueError(f"need d > d1, d > d2 and d1 + d2 > d; got {self.as_tuple()}")

    @classmethod
    def of(cls, d1: RatLike, d2: RatLike, d: RatLike) -> "DegreeTriple":
        return cls(as_rat(d1), as_rat(d2), as_rat(d))

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.d1, self.d2, self.d)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.as_tuple())

    def ints(self) -> Tuple[int, int, int]:
        if not self.is_integral:
            raise NotIntegralError(f"degree triple {self} is not integral")
        return int(self.d1), int(self.d2), int(self.d)

    @property
    def d0(self) -> Fraction:
        return self.d1 + self.d2 - self.d

    @property
    def p1(self) -> Fraction:
        return self.d * self.d1 / (self.d - self.d1)

    @property
    def p2(self) -> Fraction:
        return self.d * self.d2 / (self.d - self.d2)

    @property
    def g1(self) -> int:
        d1, _, d = self.ints()
        return gcd(d1, d)

    @property
    def g2(self) -> int:
        _, d2, d = self.ints()
        return gcd(d2, d)

    @property
    def g(self) -> int:
        d1, d2, d = self.ints()
        return gcd(gcd(d1, d2), d)

    def scaled(self, n: RatLike) -> "DegreeTriple":
        n = as_rat(n)
        return DegreeTriple(n * self.d1, n * self.d2, n * self.d)

    def period_lattice(self) -> Lattice:
        """``dZ^3`` inside index space."""
        return Lattice([(self.d1, 0, 0), (0, self.d, 0), (0, 0, self.d2)])

    def box(self):
        """Canonical representatives ``(i, j, k)`` of ``Z^3 / dZ^3``."""
        d1, d2, d = self.ints()
        for i in range(d1):
            for j in range(d):
                for k in range(d2):
                    yield (i, j, k)

    def __str__(self):
        return f"({self.d1}, {self.d2}, {self.d})"

    def to_json(self):
        out = {}
        for name in ("d1", "d2", "d", "d0"):
            v = getattr(self, name)
            out[name] = int(v) if v.denominator == 1 else rat_str(v)
        out["p1"], out["p2"] = rat_str(self.p1), rat_str(self.p2)
        if self.is_integral:
            out.update(g1=self.g1, g2=self.g2, g=self.g)
        return out


@dataclass(frozen=True)
class QuadForm:
    """``Q(m, n) = a m^2 + 2 b m n + c n^2`` with ``a, b, c > 0`` and ``b^2 > a c``."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if min(self.a, self.b, self.c) <= 0:
            raise ValueError("a, b, c must be positive")
        if self.b * self.b <= self.a * self.c:
            raise ValueError("form is not indefinite (need b^2 > a c)")

    @classmethod
    def of(cls, a: RatLike, b: RatLike, c: RatLike) -> "QuadForm":
        return cls(as_rat(a), as_rat(b), as_rat(c))

    @property
    def disc(self) -> Fraction:
        """``D = b^2 - a c``."""
        return self.b * self.b - self.a * self.c

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        m, n = x
        return self.a * m * m + 2 * self.b * m * n + self.c * n * n

    def bilinear(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        """``x.y = (Q(x+y) - Q(x) - Q(y)) / 2``."""
        return (self.a * x[0] * y[0] + self.b * (x[0] * y[1] + x[1] * y[0]) + self.c * x[1] * y[1])

    def scaled(self, r: RatLike) -> "QuadForm":
        r = as_rat(r)
        return QuadForm(r * self.a, r * self.b, r * self.c)

    def to_json(self):
        return {"a": rat_str(self.a), "b": rat_str(self.b), "c": rat_str(self.c)}


@dataclass(frozen=True)
class ModuliParams:
    v1: Fraction = Fraction(0)
    v2: Fraction = Fraction(0)
    w1: Fraction = Fraction(0)
    w2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("v1", "v2", "w1", "w2"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))

    @classmethod
    def of(cls, v1: RatLike = 0, v2: RatLike = 0, w1: RatLike = 0, w2: RatLike = 0) -> "ModuliParams":
        return cls(as_rat(v1), as_rat(v2), as_rat(w1), as_rat(w2))

    @property
    def v(self) -> Vec2:
        return (self.v1, self.v2)

    @property
    def w(self) -> Vec2:
        return (self.w1, self.w2)

    def is_zero(self) -> bool:
        return not (self.v1 or self.v2 or self.w1 or self.w2)

    def to_json(self):
        return {k: rat_str(getattr(self, k)) for k in ("v1", "v2", "w1", "w2")}


ZERO_PARAMS = ModuliParams()


# ---------------------------------------------------------------------------


def quad_form_of(t: DegreeTriple) -> QuadForm:
    d1, d2, d = t.as_tuple()
    return QuadForm(d1 * (d - d1) / d, d1 * d2 / d, d2 * (d - d2) / d)


def ab_matrices(q: QuadForm) -> Tuple[Matrix, Matrix]:
    one, zero = Fraction(1), Fraction(0)
    a_mat = [[-one, -2 * q.b / q.a], [zero, one]]
    b_mat = [[one, zero], [-2 * q.b / q.c, -one]]
    return a_mat, b_mat


def phi_matrix(t: DegreeTriple) -> Matrix:
    d1, d2, d = t.as_tuple()
    d0 = t.d0
    z = Fraction(0)
    return [[d1, z, d1 / d0], [-d1, d2, -d / d0], [z, -d2, d2 / d0]]


def phi_inv_matrix(t: DegreeTriple) -> Matrix:
    d1, d2, d = t.as_tuple()
    d0 = t.d0
    return [
        [1 / d1 - 1 / d0, -1 / d0, -1 / d0],
        [1 / d0, 1 / d0, 1 / d0 - 1 / d2],
        [Fraction(1), Fraction(1), Fraction(1)],
    ]


def phi(t: DegreeTriple, p: Sequence[RatLike]) -> Vec3:
    """``(lambda1, lambda2, l) -> (d1 lambda1 + d1 l/d0, d2 lambda2 - d1 lambda1 - d l/d0, -d2 lambda2 + d2 l/d0)``."""
    l1, l2, l = (as_rat(x) for x in p)
    d0 = t.d0
    return (
        t.d1 * l1 + t.d1 * l / d0,
        t.d2 * l2 - t.d1 * l1 - t.d * l / d0,
        -t.d2 * l2 + t.d2 * l / d0,
    )


def phi_inv(t: DegreeTriple, p: Sequence[RatLike]) -> Vec3:
    i, j, k = (as_rat(x) for x in p)
    s = i + j + k
    return (i / t.d1 - s / t.d0, -k / t.d2 + s / t.d0, s)


def lambda_lattice(t: DegreeTriple) -> Lattice:
    """``{lam : d1 lam1 + (d-d2) lam2 in dZ and (d-d1) lam1 + d2 lam2 in dZ}``."""
    d1, d2, d = t.as_tuple()
    # d * M^-1 for M = [[d1, d-d2], [d-d1, d2]]
    det = d1 * d2 - (d - d1) * (d - d2)
    s = d / det
    return Lattice([(s * d2, -s * (d - d1)), (-s * (d - d2), s * d1)])


def gamma_tilde(t: DegreeTriple) -> Lattice:
    """``phi^-1(Z^3)`` in ``(lambda1, lambda2, l)`` space."""
    return Lattice([phi_inv(t, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])


def lambda_tilde(t: DegreeTriple, period: Optional[Lattice] = None) -> Lattice:
    """``phi^-1(P)`` for an index-space lattice ``P`` (default ``dZ^3``)."""
    period = period if period is not None else t.period_lattice()
    return Lattice([phi_inv(t, b) for b in period.basis])


def gamma_lattice(t: DegreeTriple) -> Lattice:
    return gamma_tilde(t).project((0, 1))


def slice_period(t: DegreeTriple, period: Optional[Lattice] = None) -> Lattice:
    """Translations ``s`` of ``Q^2`` with ``phi(s, 0)`` in ``P``.

    A ``P``-periodic tensor pulled back along ``phi_l`` is periodic under this
    lattice for every ``l``.
    """
    return lambda_tilde(t, period).hyperplane_section()


def necessary_condition(t: DegreeTriple) -> bool:
    """``2 d1 g1/(d-d1)`` and ``2 d2 g2/(d-d2)`` are both integers."""
    if not t.is_integral:
        return False
    d1, d2, d = t.ints()
    return (2 * d1 * t.g1) % (d - d1) == 0 and (2 * d2 * t.g2) % (d - d2) == 0


def delta_generators(t: DegreeTriple) -> Tuple[Vec3, Vec3, Vec3]:
    if not necessary_condition(t):
        raise ValueError(f"necessary condition fails for {t}")
    d1, d2, d = t.as_tuple()
    d0, g1, g2, g = t.d0, t.g1, t.g2, t.g
    z1 = (-2 * d2 * g1 / (d0 * (d - d1)), Fraction(2 * g1) / d0, Fraction(2 * g1))
    z2 = (-Fraction(2 * g2) / d0, 2 * d1 * g2 / (d0 * (d - d2)), Fraction(2 * g2))
    e = (Fraction(0), Fraction(0), d0 / g)
    return z1, z2, e


def delta_lattice(t: DegreeTriple) -> Lattice:
    return Lattice(delta_generators(t))


def delta_index_period(t: DegreeTriple) -> Lattice:
    """``dZ^3 + phi(Delta)``: the extra periodicity of tensors in the inverse map."""
    return Lattice(t.period_lattice().basis + tuple(phi(t, z) for z in delta_generators(t)))


def delta_plane_period(t: DegreeTriple) -> Lattice:
    """``p12(Delta) + Lambda``."""
    z1, z2, _ = delta_generators(t)
    return Lattice((z1[:2], z2[:2]) + lambda_lattice(t).basis)


def lambda0_progressions(
    t: DegreeTriple, i: int, j: int, k: int, l: int, period: Optional[Lattice] = None
) -> Optional[Tuple[Vec2, Lattice]]:
    """``{lam in Q^2 : phi(lam, l) = (i, j, k) mod P}`` as ``(point, lattice)`` or None."""
    return affine_slice(lambda_tilde(t, period), phi_inv(t, (i, j, k)), l)


def affine_slice(lat3: Lattice, base: Sequence[Fraction], l: RatLike) -> Optional[Tuple[Vec2, Lattice]]:
    """``{lam : (lam, l) in base + lat3}`` as ``(point, lattice)`` or None."""
    gap = as_rat(l) - base[2]
    r = gap / lat3.last_coordinate_step()
    if r.denominator != 1:
        return None
    top = lat3.basis[-1]
    pt = tuple(base[a] + r * top[a] for a in range(3))
    sec = lat3.hyperplane_section()
    return sec.reduce(pt[:2]), sec


def gamma_slice(t: DegreeTriple, l: RatLike) -> Optional[Tuple[Vec2, Lattice]]:
    """``Gamma(l) = {lam : phi(lam, l) in Z^3}``, a coset of ``Gamma(0)``."""
    return affine_slice(gamma_tilde(t), (Fraction(0),) * 3, l)


def phi_l_index(t: DegreeTriple, lam: Sequence[Fraction], l: RatLike) -> Optional[Tuple[int, int, int]]:
    """``phi_l(lam)`` if it is an integer point, else None (unreduced)."""
    x = phi(t, (lam[0], lam[1], l))
    if any(c.denominator != 1 for c in x):
        return None
    return (int(x[0]), int(x[1]), int(x[2]))


def I1_set(t: DegreeTriple, u: int, i: int, j: int) -> ArithProg:
    """``{m : m = -i/d1 - j/d and d m/(d-d1) = -i/d1 - u/(d-d1) (mod Z)}``."""
    d1, _, d = t.as_tuple()
    return solve_congruences([(1, -i / d1 - j / d), (d / (d - d1), -i / d1 - u / (d - d1))])


def I2_set(t: DegreeTriple, u: int, j: int, k: int) -> ArithProg:
    """``{m : m = j/d + k/d2 and d m/(d-d2) = u/(d-d2) + k/d2 (mod Z)}``."""
    _, d2, d = t.as_tuple()
    return solve_congruences([(1, j / d + k / d2), (d / (d - d2), u / (d - d2) + k / d2)])


def x_shifts(t: DegreeTriple, params: ModuliParams) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
    """``x1 = rho1 tau + sigma1`` and ``x2 = rho2 tau + sigma2`` as ``((rho1, sigma1), (rho2, sigma2))``."""
    d1, d2, d = t.as_tuple()
    v1, v2, w1, w2 = params.v1, params.v2, params.w1, params.w2
    rho1 = -((d - d1) * v1 + d2 * v2) / d
    sig1 = -((d - d1) * w1 + d2 * w2) / d
    rho2 = -((d - d2) * v2 + d1 * v1) / d
    sig2 = -((d - d2) * w2 + d1 * w1) / d
    return (rho1, sig1), (rho2, sig2)


# -- the four reduced equation families, as affine data on index space


def periodicity_shifts(t: DegreeTriple) -> Tuple[Vec3, Vec3]:
    d1, d2, d = t.as_tuple()
    g1, g2 = t.g1, t.g2
    s1 = (-2 * d1 * g1 / (d - d1), 2 * d * g1 / (d - d1), Fraction(0))
    s2 = (Fraction(0), 2 * d * g2 / (d - d2), -2 * d2 * g2 / (d - d2))
    return s1, s2


def sign_operators(t: DegreeTriple) -> Tuple[Matrix, Matrix]:
    """The linear maps ``O1, O2`` with ``c(x) = -c(O x)`` read off the reduced equations."""
    d1, d2, d = t.as_tuple()
    one, z = Fraction(1), Fraction(0)
    e1 = d - d1
    o1 = [[-(d + d1) / e1, -2 * d1 / e1, z], [2 * d / e1, (d + d1) / e1, z], [z, z, one]]
    e2 = d - d2
    o2 = [[one, z, z], [z, (d + d2) / e2, 2 * d / e2], [z, -2 * d2 / e2, -(d + d2) / e2]]
    return o1, o2


def conjugated_ab(t: DegreeTriple) -> Tuple[Matrix, Matrix]:
    """``phi (A x id) phi^-1`` and ``phi (B x id) phi^-1`` on index space."""
    a, b = ab_matrices(quad_form_of(t))
    z, one = Fraction(0), Fraction(1)
    out = []
    for m in (a, b):
        ext = [[m[0][0], m[0][1], z], [m[1][0], m[1][1], z], [z, z, one]]
        out.append(mat_mul(mat_mul(phi_matrix(t), ext), phi_inv_matrix(t)))
    return out[0], out[1]


def apply(m: Matrix, x: Sequence[RatLike]) -> Vec3:
    return tuple(mat_vec(m, [as_rat(c) for c in x]))  # type: ignore[return-value]
