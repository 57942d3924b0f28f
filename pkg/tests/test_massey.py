import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hecke_massey import jsonio
from hecke_massey.geometry import DegreeTriple, ModuliParams, ZERO_PARAMS, gamma_lattice, quad_form_of
from hecke_massey.indeftheta import DegenerateShiftError, theta_indef
from hecke_massey.linalg import same_span
from hecke_massey.massey import (
    MasseyTensor, aggregate_f, f_from_system, mp_coefficient, mp_coefficient_via_triples, sum_functions,
    triple_theta, universal_massey_kernel_exact, universal_massey_kernel_truncated, verify_double_products,
    verify_thm1,
)
from hecke_massey.numeric import Cyclo, exp2pi
from conftest import kernel
from oracles import admissible_triples, double_product_rows, massey_nullity, phi_formula, tensor_value

T = DegreeTriple.of
GENERIC = ModuliParams.of(F(1, 3), F(1, 3), F(1, 4), F(1, 4))


def test_tensor_basics():
    t = T(2, 2, 3)
    c = MasseyTensor(t, {(0, 1, 0): 1, (2, 4, -1): 5})
    assert c((0, 1, 0)) == 1 and c((2, 4, 0)) == 1 and c((0, 1, 1)) == 5 and c((1, 1, 0)) == 0
    assert c((F(1, 2), 1, 0)) == 0
    assert c((2, 7, 2)) == 1
    assert jsonio.tensor_from_json(jsonio.to_plain(c)) == c
    assert MasseyTensor.from_vector(t, c.to_vector()) == c


@pytest.mark.parametrize("t", [t for t in admissible_triples(5)] + [(3, 4, 6)])
def test_exact_kernel_against_oracle(t):
    rep = kernel(t)
    assert rep.dimension == massey_nullity(*t)
    rows = double_product_rows(*t)
    for c in rep.basis:
        v = c.to_vector()
        assert all(sum(r[i] * v[i] for i in range(len(v))) == 0 for r in rows)


def test_kernel_examples():
    assert kernel((2, 4, 5)).basis == [] and "necessary condition fails" in kernel((2, 4, 5)).notes
    assert kernel((2, 2, 3)).dimension == 4
    rep = universal_massey_kernel_truncated(T(2, 4, 5), ZERO_PARAMS, 6, 8)
    assert rep.dimension == 0


@pytest.mark.parametrize("t", [(2, 2, 3), (2, 3, 4), (3, 3, 4)])
def test_truncated_matches_exact(t):
    ex = kernel(t)
    tr = universal_massey_kernel_truncated(T(*t), ZERO_PARAMS, 4, 8)
    n = len(list(T(*t).box()))
    assert same_span([c.to_vector() for c in ex.basis], [c.to_vector() for c in tr.basis], n)


def test_double_products():
    t = T(2, 2, 3)
    assert verify_double_products(t, ZERO_PARAMS, MasseyTensor(t, {}), 8)
    for c in kernel((2, 2, 3)).basis:
        assert verify_double_products(t, ZERO_PARAMS, c, 8)
    # violates one instance of the periodicity relations
    assert not verify_double_products(t, ZERO_PARAMS, MasseyTensor(t, {(0, 1, 0): 1}), 8)


def test_triple_theta_examples():
    t = T(2, 2, 3)
    s = triple_theta(t, ZERO_PARAMS, 0, 0, 0, 0, 6, "CLOSED")
    assert s[0] == 1
    # (i, j, k) = (0, 0, 1) with l = 0: the lambda2 congruence is inconsistent with lambda in the slice
    empties = [idx for idx in t.box() if triple_theta(t, ZERO_PARAMS, *idx, 0, 4, "CLOSED").is_zero()]
    assert empties  # some index blocks carry no lattice points


@pytest.mark.parametrize("params", [GENERIC, ModuliParams.of(F(1, 5), F(1, 7), F(1, 3), 0)])
def test_open_equals_closed_generic(params):
    t = T(2, 2, 3)
    for idx in t.box():
        try:
            op = triple_theta(t, params, *idx, 0, 5, "OPEN")
        except DegenerateShiftError:
            continue
        assert op == triple_theta(t, params, *idx, 0, 5, "CLOSED")


def test_open_rejects_degenerate():
    with pytest.raises(DegenerateShiftError):
        triple_theta(T(2, 2, 3), ZERO_PARAMS, 0, 0, 0, 0, 4, "OPEN")


@pytest.mark.parametrize("t", [(2, 2, 3), (3, 3, 4)])
def test_mp_linear_and_via_triples(t):
    tt = T(*t)
    b = kernel(t).basis
    c1, c2 = b[0], b[-1]
    assert mp_coefficient(tt, ZERO_PARAMS, MasseyTensor(tt, {}), 0, 6).is_zero()
    for l in range(int(tt.d0)):
        m1, m2 = mp_coefficient(tt, ZERO_PARAMS, c1, l, 6), mp_coefficient(tt, ZERO_PARAMS, c2, l, 6)
        assert mp_coefficient(tt, ZERO_PARAMS, c1 + c2.scale(3), l, 6) == m1 + m2 * 3
        assert mp_coefficient_via_triples(tt, ZERO_PARAMS, c1, l, 6) == m1


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 5), st.integers(0, 3), st.integers(-3, 3)),
                max_size=6), st.integers(0, 1))
def test_mp_ignores_unreachable_indices(junk, l):
    # for (4,4,6): g = 2 and phi(lam, l) has i + j + k = l mod 2
    t = T(4, 4, 6)
    c = kernel((4, 4, 6)).basis[0]
    extra = MasseyTensor(t, {(i, j, k): v for i, j, k, v in junk if (i + j + k - l) % 2})
    assert mp_coefficient(t, ZERO_PARAMS, c + extra, l, 4) == mp_coefficient(t, ZERO_PARAMS, c, l, 4)


@pytest.mark.parametrize("t", [(2, 2, 3), (2, 3, 4), (4, 4, 6)])
def test_f_from_system_pointwise(t):
    tt = T(*t)
    rng = random.Random(7)
    gam = gamma_lattice(tt)
    for c in kernel(t).basis[:3]:
        for l in range(int(tt.d0)):
            f = f_from_system(tt, ZERO_PARAMS, c, l)
            assert gam.contains_lattice(f.support) and f.support.contains_lattice(f.period)
            for _ in range(200):
                den = rng.choice([1, 2, 3, 6, 12, 24])
                x = (F(rng.randint(-60, 60), den), F(rng.randint(-60, 60), den))
                assert f(x) == tensor_value(c.entries, *t, phi_formula(*t, x[0], x[1], l))


def test_f_zero_and_aggregate():
    tt = T(4, 4, 6)
    assert f_from_system(tt, ZERO_PARAMS, MasseyTensor(tt, {}), 0).is_zero()
    rng = random.Random(3)
    for c in kernel((4, 4, 6)).basis[:4]:
        agg = aggregate_f(tt, c)
        parts = sum_functions(f_from_system(tt, ZERO_PARAMS, c, l) for l in range(2))
        for _ in range(200):
            x = (F(rng.randint(-40, 40), 4), F(rng.randint(-40, 40), 4))
            direct = sum((tensor_value(c.entries, 4, 4, 6, phi_formula(4, 4, 6, x[0], x[1], l)) for l in range(2)), 0)
            assert agg(x) == parts(x) == direct


def test_f_from_system_with_params():
    tt = T(2, 2, 3)
    rep = universal_massey_kernel_truncated(tt, GENERIC, 4, 8)
    assert rep.dimension == 1
    c = rep.basis[0]
    q = quad_form_of(tt)
    v, w = GENERIC.v, GENERIC.w
    f = f_from_system(tt, GENERIC, c, 0)
    rng = random.Random(11)
    for _ in range(200):
        x = (F(rng.randint(-72, 72), 12), F(rng.randint(-72, 72), 12))
        lam = (x[0] - v[0], x[1] - v[1])
        base = tensor_value(c.entries, 2, 2, 3, phi_formula(2, 2, 3, lam[0], lam[1], 0))
        expect = base * exp2pi(q.bilinear(lam, w)) if base else 0
        assert f(x) == expect


def test_thm1_with_params():
    tt = T(2, 2, 3)
    rep = universal_massey_kernel_truncated(tt, GENERIC, 4, 8)
    r = verify_thm1(tt, GENERIC, rep.basis[0], 6)
    assert r.passed and r.per_l[0]["terms"] > 0
    # the parameters suggested for this check admit no nonzero system for (2,2,3)
    spec_params = ModuliParams.of(F(1, 5), F(1, 7), F(1, 3), 0)
    assert universal_massey_kernel_truncated(tt, spec_params, 4, 8).dimension == 0


def test_thm1_zero_and_mutation():
    tt = T(2, 2, 3)
    assert verify_thm1(tt, ZERO_PARAMS, MasseyTensor(tt, {}), 6).passed
    c = kernel((2, 2, 3)).basis[0]
    assert verify_thm1(tt, ZERO_PARAMS, c, 6).passed
    key = sorted(c.entries)[0]
    bad = c.with_entry(key, -c.entries[key])
    r = verify_thm1(tt, ZERO_PARAMS, bad, 6)
    assert not r.passed and r.failing_l == [0]
