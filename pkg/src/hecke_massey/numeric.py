"""Exact rationals and elements of cyclotomic fields.

Rationals are plain :class:`fractions.Fraction`.  A :class:`Cyclo` is an element
of ``Q(zeta_M)`` stored by its coordinates on the power basis
``1, zeta_M, ..., zeta_M^(phi(M)-1)``, i.e. reduced modulo the cyclotomic
polynomial ``Phi_M``.  Values of different orders compare equal when they
agree after embedding both into ``Q(zeta_lcm)``.

>>> z4 = root_of_unity(1, 4)
>>> z4 * z4 == -1
True
>>> root_of_unity(1, 3) + root_of_unity(2, 3) + 1 == 0
True
"""

from __future__ import annotations

import cmath
import os
import threading
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Rat = Fraction
RatLike = Union[int, Fraction, str]

__all__ = [
    "Rat",
    "as_rat",
    "rat_str",
    "Cyclo",
    "CycloOrderError",
    "root_of_unity",
    "cyclo_embed",
    "cyclotomic_polynomial",
    "euler_phi",
    "max_order",
    "set_max_order",
]


class CycloOrderError(ValueError):
    """Raised when an operation would need a cyclotomic order above the cap."""


_MAX_ORDER = int(os.environ.get("HM_MAX_CYCLO_ORDER", "10000"))


def max_order() -> int:
    return _MAX_ORDER


def set_max_order(n: int) -> None:
    global _MAX_ORDER
    if n < 1:
        raise ValueError("order cap must be positive")
    _MAX_ORDER = int(n)


def as_rat(x: RatLike) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction.

    Floats are refused to keep float contamination out of exact code paths.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(r: RatLike) -> str:
    r = as_rat(r)
    return f"{r.numerator}/{r.denominator}"


# ---------------------------------------------------------------------------
# cyclotomic polynomials and power-reduction tables

_lock = threading.Lock()
_phi_poly: Dict[int, Tuple[int, ...]] = {}
_powers: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
_traces: Dict[int, Tuple[Fraction, ...]] = {}


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(n: int) -> int:
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def _divisors(n: int) -> List[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _polydiv_exact(num: List[int], den: Sequence[int]) -> List[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        coef = num[k]
        if coef:
            out[k - dq] = coef
            for t in range(dq + 1):
                num[k - dq + t] -= coef * den[t]
    assert not any(num[:dq]), "non-exact cyclotomic division"
    return out


def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of ``Phi_n``, lowest degree first."""
    cached = _phi_poly.get(n)
    if cached is not None:
        return cached
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d < n:
            poly = _polydiv_exact(poly, cyclotomic_polynomial(d))
    res = tuple(poly)
    with _lock:
        _phi_poly.setdefault(n, res)
    return _phi_poly[n]


def _power_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    """``table[e]`` = coordinates of ``zeta_n^e`` for ``0 <= e < n``."""
    cached = _powers.get(n)
    if cached is not None:
        return cached
    if n > _MAX_ORDER:
        raise CycloOrderError(f"cyclotomic order {n} exceeds cap {_MAX_ORDER}")
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    cur = [1] + [0] * (deg - 1)
    rows = []
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [cur[k] - top * phi[k] for k in range(deg)]
    res = tuple(rows)
    with _lock:
        _powers.setdefault(n, res)
    return _powers[n]


def _trace_weights(n: int) -> Tuple[Fraction, ...]:
    # normalized trace Tr(zeta_n^j)/phi(n); invariant under field embeddings
    cached = _traces.get(n)
    if cached is not None:
        return cached
    ph = euler_phi(n)
    w = []
    for j in range(ph):
        m = n // gcd(n, j)
        w.append(Fraction(_mobius(m), euler_phi(m)))
    res = tuple(w)
    with _lock:
        _traces.setdefault(n, res)
    return _traces[n]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------


class Cyclo:
    """Immutable element of ``Q(zeta_order)``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RatLike]):
        order = int(order)
        if order < 1:
            raise ValueError("order must be positive")
        cs = tuple(as_rat(c) for c in coeffs)
        if len(cs) != euler_phi(order):
            raise ValueError(f"Q(zeta_{order}) needs {euler_phi(order)} coordinates, got {len(cs)}")
        if order > _MAX_ORDER:
            raise CycloOrderError(f"cyclotomic order {order} exceeds cap {_MAX_ORDER}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def _raw(cls, order: int, coeffs: Tuple[Fraction, ...]) -> "Cyclo":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo is immutable")

    def __reduce__(self):
        return (Cyclo, (self.order, self.coeffs))

    @classmethod
    def rational(cls, r: RatLike) -> "Cyclo":
        return cls._raw(1, (as_rat(r),))

    @staticmethod
    def coerce(x: Union["Cyclo", RatLike]) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        return Cyclo.rational(x)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return self.order == 1 or not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def embed(self, n: int) -> "Cyclo":
        if n == self.order:
            return self
        if n % self.order:
            raise ValueError(f"order {self.order} does not divide {n}")
        if self.order == 1:
            return Cyclo._raw(n, (self.coeffs[0],) + (Fraction(0),) * (euler_phi(n) - 1))
        table = _power_table(n)
        step = n // self.order
        out = [Fraction(0)] * euler_phi(n)
        for j, c in enumerate(self.coeffs):
            if c:
                for k, t in enumerate(table[j * step]):
                    if t:
                        out[k] += c * t
        return Cyclo._raw(n, tuple(out))

    def _common(self, other: "Cyclo") -> Tuple["Cyclo", "Cyclo"]:
        if self.order == other.order:
            return self, other
        n = _lcm(self.order, other.order)
        return self.embed(n), other.embed(n)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Cyclo):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return self
                return Cyclo._raw(self.order, (self.coeffs[0] + other,) + self.coeffs[1:])
            return NotImplemented
        a, b = self._common(other)
        return Cyclo._raw(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (Cyclo, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclo):
            if isinstance(other, (int, Fraction)):
                return Cyclo._raw(self.order, tuple(x * other for x in self.coeffs))
            return NotImplemented
        if other.order == 1:
            return self * other.coeffs[0]
        if self.order == 1:
            return other * self.coeffs[0]
        a, b = self._common(other)
        n = a.order
        table = _power_table(n)
        ph = len(a.coeffs)
        acc = [Fraction(0)] * (2 * ph - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        acc[i + j] += x * y
        out = acc[:ph]
        for e in range(ph, 2 * ph - 1):
            c = acc[e]
            if c:
                for k, t in enumerate(table[e % n]):
                    if t:
                        out[k] += c * t
        return Cyclo._raw(n, tuple(out))

    __rmul__ = __mul__

    def times_root(self, num: int, den: int) -> "Cyclo":
        """Multiply by ``exp(2 pi i num/den)`` without building the root first."""
        g = gcd(num, den)
        num, den = (num // g) % (den // g), den // g
        if num == 0:
            return self
        n = _lcm(self.order, den)
        a = self.embed(n)
        table = _power_table(n)
        shift = num * (n // den)
        out = [Fraction(0)] * len(a.coeffs)
        for j, c in enumerate(a.coeffs):
            if c:
                for k, t in enumerate(table[(j + shift) % n]):
                    if t:
                        out[k] += c * t
        return Cyclo._raw(n, tuple(out))

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return Cyclo.rational(1 / self.coeffs[0]).embed(self.order)
        from .linalg import solve

        n = self.order
        ph = len(self.coeffs)
        # column j = self * zeta^j
        cols = [self.times_root(j, n).coeffs for j in range(ph)]
        mat = [[cols[j][i] for j in range(ph)] for i in range(ph)]
        rhs = [Fraction(1)] + [Fraction(0)] * (ph - 1)
        sol = solve(mat, rhs)
        assert sol is not None
        return Cyclo._raw(n, tuple(sol))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Cyclo._raw(self.order, tuple(x / other for x in self.coeffs))
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclo.rational(1).embed(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "Cyclo":
        n = self.order
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c:
                for k, t in enumerate(table[(-j) % n]):
                    if t:
                        out[k] += c * t
        return Cyclo._raw(n, tuple(out))

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        w = _trace_weights(self.order)
        return hash(sum((c * t for c, t in zip(self.coeffs, w)), Fraction(0)))

    # -- presentation ------------------------------------------------------

    def simplify(self) -> "Cyclo":
        """Same value re-expressed in the smallest ``Q(zeta_d)`` containing it."""
        from .linalg import solve

        if self.is_rational():
            return Cyclo.rational(self.coeffs[0])
        n = self.order
        for d in _divisors(n):
            if d == n:
                break
            if d % 4 == 2:
                continue
            step = n // d
            table = _power_table(n)
            cols = [table[j * step] for j in range(euler_phi(d))]
            mat = [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(len(self.coeffs))]
            sol = solve(mat, list(self.coeffs))
            if sol is not None:
                return Cyclo._raw(d, tuple(sol))
        return self

    def __complex__(self):
        n = self.order
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in enumerate(self.coeffs) if c),
            0j,
        )

    def __repr__(self):
        return f"Cyclo({self.order}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        x = self.simplify()
        if x.order == 1:
            return str(x.coeffs[0])
        parts = []
        for k, c in enumerate(x.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = f"z{x.order}" + (f"^{k}" if k > 1 else "")
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def root_of_unity(num: int, den: int) -> Cyclo:
    """``exp(2 pi i num/den)``, stored at order ``den / gcd(num, den)``."""
    if den <= 0:
        raise ValueError("den must be positive")
    g = gcd(num, den)
    n = den // g
    e = (num // g) % n
    return Cyclo._raw(n, tuple(Fraction(t) for t in _power_table(n)[e]))


def cyclo_embed(x: Cyclo, n: int) -> Cyclo:
    return x.embed(n)


def exp2pi(r: RatLike) -> Cyclo:
    """``exp(2 pi i r)`` for rational ``r``."""
    r = as_rat(r)
    return root_of_unity(r.numerator, r.denominator)
