from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hecke_massey.geometry import (
    DegreeTriple, QuadForm, delta_plane_period, gamma_lattice, necessary_condition, quad_form_of,
)
from hecke_massey.indeftheta import CosetFunction2, check_f_condition, theta_indef
from hecke_massey.inversion import (
    PreconditionError, ScaleNotFound, _scale_conditions, antisymmetrize, degrees_from_form, find_scale_N,
    forced_base, rescale_form, scale_function, system_from_f, thm2_pipeline,
)
from hecke_massey.lattice import Lattice
from hecke_massey.massey import MasseyTensor, aggregate_f
from conftest import kernel
from oracles import admissible_triples

T = DegreeTriple.of
Z2 = Lattice.standard(2)
QX = QuadForm.of(1, F(3, 2), 1)
FX = antisymmetrize(QX, Z2, Lattice.standard(2, 4), (0, 1))


def test_rescale_examples():
    x, y, q = rescale_form(QX)
    assert (x, y) == (1, 1) and q == QX
    x, y, q = rescale_form(QuadForm.of(1, 1, F(3, 4)))
    assert (x, y, (q.a, q.b, q.c)) == (7, 8, (49, 56, 48))


forms = st.tuples(*(st.fractions(min_value=F(1, 5), max_value=5, max_denominator=6),) * 3).filter(
    lambda t: t[1] ** 2 > t[0] * t[2])


@given(forms)
def test_rescale_property(abc):
    x, y, q = rescale_form(QuadForm.of(*abc))
    assert x > 0 and y > 0 and q.b > q.a and q.b > q.c
    assert (q.a, q.b, q.c) == (x * x * abc[0], x * y * abc[1], y * y * abc[2])
    t = degrees_from_form(q)
    assert quad_form_of(t) == q


def test_degrees_dictionary_roundtrip():
    for t in admissible_triples(8):
        assert degrees_from_form(quad_form_of(T(*t))) == T(*t)
    assert degrees_from_form(QX) == T(F(5, 2), F(5, 2), F(25, 6))
    with pytest.raises(PreconditionError):
        degrees_from_form(QuadForm.of(2, F(3, 2), 1))


@given(st.fractions(min_value=F(1, 50), max_value=50, max_denominator=400))
def test_forced_base_minimal(r):
    t = T(r, r, r * F(3, 2))
    n0 = forced_base(t)
    assert t.scaled(n0 * n0).is_integral
    assert all(not t.scaled(n * n).is_integral or n % n0 == 0 for n in range(1, 3 * n0 + 1))


def test_scale_N_external_golden():
    t = degrees_from_form(QX)
    assert forced_base(t) == 6
    assert find_scale_N(t, FX) == 12
    # oracle sweep over every N (not only multiples of the forced base)
    ok = [n for n in range(1, 40) if _scale_conditions(t, FX, n)[0] is None]
    assert ok[0] == 12 and all(n % 12 == 0 for n in ok)
    assert _scale_conditions(t, FX, 6)[0] == "period_inclusion"


def test_scale_N_cap():
    t = degrees_from_form(QX)
    with pytest.raises(ScaleNotFound) as e:
        find_scale_N(t, FX, cap=1)
    assert e.value.diagnostics["forced_base"] == 6
    with pytest.raises(ScaleNotFound) as e:
        find_scale_N(t, FX, cap=11)
    assert e.value.diagnostics["first_failing_condition"] == "period_inclusion"


@pytest.mark.parametrize("n", [2, 3])
def test_rescaled_series_invariance(n):
    # Theta_{Q, f} = Theta_{N^2 Q, f'} with f'(x) = f(N x)
    fp = scale_function(FX, n, n)
    q2 = QuadForm.of(n * n * QX.a, n * n * QX.b, n * n * QX.c)
    assert theta_indef(q2, fp, 5) == theta_indef(QX, FX, 5)
    x, y = F(2, 3), F(5, 4)
    q3 = QuadForm.of(x * x * QX.a, x * y * QX.b, y * y * QX.c)
    assert theta_indef(q3, scale_function(FX, x, y), 5) == theta_indef(QX, FX, 5)


@pytest.mark.parametrize("t", [t for t in admissible_triples(6) if necessary_condition(T(*t))])
def test_plane_period_rescale_invariance(t):
    per = delta_plane_period(T(*t))
    for n in (2, 3):
        assert delta_plane_period(T(*(n * x for x in t))) == per


@pytest.mark.parametrize("t", [(2, 2, 3), (3, 3, 4), (4, 4, 6)])
def test_system_roundtrip(t):
    tt = T(*t)
    per = delta_plane_period(tt)
    for c in kernel(t, True).basis:
        f = aggregate_f(tt, c, per)
        back = system_from_f(tt, f)
        assert back == c
        assert aggregate_f(tt, back, per).equals(f)


def test_system_from_f_zero_and_rejections():
    tt = T(2, 2, 3)
    gam = gamma_lattice(tt)
    assert system_from_f(tt, CosetFunction2.zero(gam)).is_zero()
    with pytest.raises(PreconditionError, match="outside Gamma"):
        system_from_f(tt, CosetFunction2(Lattice.standard(2, F(1, 4)), Z2, {(F(1, 4), 0): 1}))
    with pytest.raises(PreconditionError, match="periodic"):
        system_from_f(tt, CosetFunction2(gam, Lattice.standard(2, 12), {(0, 0): 1}))
    with pytest.raises(PreconditionError, match="necessary"):
        system_from_f(T(2, 4, 5), CosetFunction2.zero(Z2))


def test_antisymmetrize():
    assert check_f_condition(QX, FX) and not FX.is_zero()
    assert len(FX.values) == 6
    # the origin is fixed by A, an odd word: the signed orbit collapses
    assert antisymmetrize(QX, Z2, Lattice.standard(2, 3), (0, 0)).is_zero()
    # non-vacuous function whose series still vanishes to this order
    f3 = antisymmetrize(QX, Z2, Lattice.standard(2, 3), (1, 1))
    assert not f3.is_zero() and theta_indef(QX, f3, 4).is_zero()
    # B maps (1, 0) to (1, -3), outside Z x 2Z
    with pytest.raises(PreconditionError):
        antisymmetrize(QX, Lattice([(1, 0), (0, 2)]), Lattice.standard(2, 4), (0, 2))


def test_pipeline_zero():
    rep = thm2_pipeline(QX, CosetFunction2.zero(Z2), 4)
    assert rep.passed and rep.lhs.is_zero() and rep.tensor.is_zero()


def test_pipeline_closed_loop():
    tt = T(2, 2, 3)
    c0 = kernel((2, 2, 3), True).basis[1]
    f = aggregate_f(tt, c0, delta_plane_period(tt))
    rep = thm2_pipeline(quad_form_of(tt), f, 6)
    assert rep.N == 1 and rep.tensor == c0 and rep.passed and not rep.lhs.is_zero()


def test_pipeline_workers_match_serial():
    tt = T(4, 4, 6)
    c0 = kernel((4, 4, 6), True).basis[0]
    f = aggregate_f(tt, c0, delta_plane_period(tt))
    a = thm2_pipeline(quad_form_of(tt), f, 4)
    b = thm2_pipeline(quad_form_of(tt), f, 4, workers=2)
    assert a.rhs == b.rhs and a.per_l_terms == b.per_l_terms and b.passed
