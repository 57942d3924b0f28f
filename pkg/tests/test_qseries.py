import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hecke_massey.numeric import root_of_unity
from hecke_massey.qseries import QSeries, qs_add, qs_eq, qs_eval_float, qs_mul, qs_shift


def test_add_examples():
    a = qs_add(QSeries(3, {F(1, 2): 1}), QSeries(3, {F(1, 2): -1}))
    assert a.is_zero() and a.truncation == 3
    b = qs_add(QSeries(2, {0: 1, 1: 1}), QSeries(5, {1: 1}))
    assert b.truncation == 2 and b == QSeries(2, {0: 1, 1: 2})
    assert qs_add(QSeries(4, {}), QSeries(4, {3: 1})) == QSeries(4, {3: 1})


def test_mul_examples():
    assert qs_mul(QSeries(9, {F(1, 2): 1}), QSeries(9, {F(1, 3): 1})) == QSeries(9, {F(5, 6): 1})
    assert qs_mul(QSeries(3, {0: 1, 1: 1}), QSeries(3, {0: 1, 1: -1})) == QSeries(3, {0: 1, 2: -1})
    assert qs_mul(QSeries(3, {0: 1, 1: 1}), QSeries(3, {})).is_zero()
    with pytest.raises(ValueError):
        qs_mul(QSeries(3, {-1: 1}), QSeries(3, {0: 1}))


def test_shift_examples():
    s = qs_shift(QSeries(2, {0: 1, 1: 1}), F(1, 2))
    assert s.truncation == F(5, 2) and s == QSeries(F(5, 2), {F(1, 2): 1, F(3, 2): 1})
    x = QSeries(4, {F(1, 3): 2})
    assert qs_shift(x, 0) == x
    assert qs_shift(qs_shift(x, F(7, 5)), -F(7, 5)) == x


def test_eq_examples():
    assert qs_eq(QSeries(5, {1: 1}), QSeries(9, {1: 1}), 5)
    assert not qs_eq(QSeries(5, {1: 1}), QSeries(5, {1: 2}), 5)
    with pytest.raises(ValueError):
        qs_eq(QSeries(5, {}), QSeries(9, {}), 6)


def test_truncation_drops_terms():
    s = QSeries(2, {1: 1, 2: 5, 3: 1})
    assert s.terms == {1: 1}


def test_eval_float():
    assert qs_eval_float(QSeries(3, {}), 1) == 0
    assert qs_eval_float(QSeries(3, {0: 1}), 7) == 1
    assert abs(qs_eval_float(QSeries(3, {1: 1}), 1) - math.exp(-2 * math.pi)) < 1e-15
    with pytest.raises(ValueError):
        qs_eval_float(QSeries(3, {}), 0)


@st.composite
def series(draw, trunc=F(4)):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        e = F(draw(st.integers(0, 11)), draw(st.sampled_from([1, 2, 3])))
        terms[e] = draw(st.integers(-3, 3)) * root_of_unity(draw(st.integers(0, 5)), 6)
    return QSeries(trunc, terms)


@given(series(), series(), series())
def test_ring_axioms(x, y, z):
    assert qs_eq(qs_mul(x, qs_add(y, z)), qs_add(qs_mul(x, y), qs_mul(x, z)), 4)
    assert qs_mul(x, y) == qs_mul(y, x)


@given(series(), series(), st.fractions(min_value=0, max_value=3, max_denominator=4))
def test_shift_commutes_with_mul(x, y, e):
    assert qs_shift(qs_mul(x, y), e) == qs_mul(qs_shift(x, e), y)
