"""Truncated formal series in ``q`` with rational exponents.

A :class:`QSeries` knows every coefficient of ``q^e`` for ``e < truncation``
and nothing beyond; every operation propagates the smallest truncation of its
inputs so a result never claims knowledge it does not have.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Tuple, Union

from .numeric import Cyclo, RatLike, as_rat, rat_str

Coeff = Union[Cyclo, Fraction, int]

__all__ = ["QSeries", "SeriesBuilder", "qs_add", "qs_mul", "qs_shift", "qs_eq", "qs_eval_float"]


class QSeries:
    __slots__ = ("truncation", "terms")

    def __init__(self, truncation: RatLike, terms: Mapping[RatLike, Coeff] = ()):
        trunc = as_rat(truncation)
        clean: Dict[Fraction, Cyclo] = {}
        for e, c in dict(terms).items():
            e = as_rat(e)
            if e >= trunc:
                continue
            c = Cyclo.coerce(c)
            if not c.is_zero():
                clean[e] = c
        self.truncation = trunc
        self.terms = clean

    @classmethod
    def zero(cls, truncation: RatLike) -> "QSeries":
        return cls(truncation)

    @classmethod
    def monomial(cls, exponent: RatLike, truncation: RatLike, coeff: Coeff = 1) -> "QSeries":
        return cls(truncation, {as_rat(exponent): coeff})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, e: RatLike) -> Cyclo:
        e = as_rat(e)
        if e >= self.truncation:
            raise KeyError(f"exponent {e} is beyond truncation {self.truncation}")
        return self.terms.get(e, Cyclo.rational(0))

    def exponents(self):
        return sorted(self.terms)

    def denominator(self) -> int:
        """Common denominator of the stored exponents (the ``n`` of ``q^(1/n)``)."""
        den = 1
        for e in self.terms:
            den = den * e.denominator // gcd(den, e.denominator)
        return den

    def valuation(self):
        return min(self.terms) if self.terms else None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, other)

    def __neg__(self) -> "QSeries":
        return QSeries(self.truncation, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction, Cyclo)):
            return QSeries(self.truncation, {e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, e: RatLike) -> "QSeries":
        return qs_shift(self, e)

    def truncate(self, t: RatLike) -> "QSeries":
        t = as_rat(t)
        return QSeries(min(t, self.truncation), self.terms)

    def __eq__(self, other):
        """Exact equality of the known parts, up to the common truncation."""
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_eq(self, other, min(self.truncation, other.truncation))

    __hash__ = None

    def eval_float(self, tau_im: RatLike) -> complex:
        return qs_eval_float(self, tau_im)

    # -- presentation ------------------------------------------------------

    def __repr__(self):
        return f"QSeries(truncation={self.truncation}, terms={len(self.terms)})"

    def __str__(self):
        if not self.terms:
            return f"0 + O(q^{self.truncation})"
        parts = []
        for e in self.exponents():
            c = self.terms[e]
            mono = "" if e == 0 else ("q" if e == 1 else f"q^({e})")
            cs = str(c)
            if mono and cs == "1":
                parts.append(mono)
            elif mono and cs == "-1":
                parts.append("-" + mono)
            elif mono:
                parts.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ") + f" + O(q^{self.truncation})"

    def to_json(self):
        from .jsonio import cyclo_to_json

        return {
            "truncation": rat_str(self.truncation),
            "terms": [[rat_str(e), cyclo_to_json(self.terms[e])] for e in self.exponents()],
        }


class SeriesBuilder:
    """Mutable accumulator for hot enumeration loops; call :meth:`build` once."""

    __slots__ = ("truncation", "_acc")

    def __init__(self, truncation: RatLike):
        self.truncation = as_rat(truncation)
        self._acc: Dict[Fraction, Coeff] = {}

    def add(self, exponent: Fraction, coeff: Coeff) -> None:
        if exponent >= self.truncation:
            return
        prev = self._acc.get(exponent)
        self._acc[exponent] = coeff if prev is None else prev + coeff

    def add_series(self, s: QSeries, scale: Coeff = 1) -> None:
        if s.truncation < self.truncation:
            self.truncation = s.truncation
        for e, c in s.terms.items():
            self.add(e, c * scale if scale != 1 else c)

    def build(self) -> QSeries:
        return QSeries(self.truncation, {e: c for e, c in self._acc.items() if e < self.truncation})


def qs_add(x: QSeries, y: QSeries) -> QSeries:
    t = min(x.truncation, y.truncation)
    acc: Dict[Fraction, Cyclo] = {e: c for e, c in x.terms.items() if e < t}
    for e, c in y.terms.items():
        if e < t:
            acc[e] = acc[e] + c if e in acc else c
    return QSeries(t, acc)


def qs_mul(x: QSeries, y: QSeries) -> QSeries:
    if any(e < 0 for e in x.terms) or any(e < 0 for e in y.terms):
        raise ValueError("qs_mul requires nonnegative exponents")
    t = min(x.truncation, y.truncation)
    b = SeriesBuilder(t)
    for e1, c1 in x.terms.items():
        if e1 >= t:
            continue
        for e2, c2 in y.terms.items():
            b.add(e1 + e2, c1 * c2)
    return b.build()


def qs_shift(x: QSeries, e: RatLike) -> QSeries:
    e = as_rat(e)
    return QSeries(x.truncation + e, {k + e: c for k, c in x.terms.items()})


def qs_eq(x: QSeries, y: QSeries, upto: RatLike) -> bool:
    upto = as_rat(upto)
    if upto > x.truncation or upto > y.truncation:
        raise ValueError(f"cannot compare up to {upto}: truncations are {x.truncation}, {y.truncation}")
    keys = {e for e in x.terms if e < upto} | {e for e in y.terms if e < upto}
    zero = Cyclo.rational(0)
    return all(x.terms.get(e, zero) == y.terms.get(e, zero) for e in keys)


def qs_eval_float(x: QSeries, tau_im: RatLike) -> complex:
    """Numeric preview at ``q = exp(-2 pi tau_im)``; not used by any exact check."""
    tau_im = as_rat(tau_im)
    if tau_im <= 0:
        raise ValueError("tau_im must be positive")
    total = 0j
    for e, c in x.terms.items():
        total += complex(c) * math.exp(-2 * math.pi * float(tau_im) * float(e))
    return total


def series_from_pairs(truncation: RatLike, pairs: Iterable[Tuple[RatLike, Coeff]]) -> QSeries:
    b = SeriesBuilder(truncation)
    for e, c in pairs:
        b.add(as_rat(e), c)
    return b.build()
