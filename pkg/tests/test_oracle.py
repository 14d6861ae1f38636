import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from spikedho import BasisParams, DomainDiverges, MatElemQuery, matel_gk
from spikedho.oracle import (
    TEST_FUNCTIONS,
    f11_recurrence,
    gauss_laguerre_rule,
    matel_quadrature,
    matel_termwise,
    overlap_quadrature,
    parseval_partial,
    parseval_sequence,
    projection_coefficients,
    raw_overlap_integral,
)
from spikedho.specfun import f11_eval

SQPI = math.sqrt(math.pi)


def test_rule_examples():
    r = gauss_laguerre_rule(0.0, 1)
    assert r.nodes == pytest.approx((1.0,)) and r.weights == pytest.approx((1.0,))
    r = gauss_laguerre_rule(0.0, 2)
    s = math.sqrt(2.0)
    assert r.nodes == pytest.approx((2 - s, 2 + s), rel=1e-14)
    assert r.weights == pytest.approx(((2 + s) / 4, (2 - s) / 4), rel=1e-14)
    r = gauss_laguerre_rule(1.0, 1)
    assert r.nodes == pytest.approx((2.0,)) and r.weights == pytest.approx((1.0,))


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.9, 5.0), st.integers(1, 14))
def test_rule_integrates_moments_exactly(a, npts):
    r = gauss_laguerre_rule(a, npts)
    assert all(x > 0 for x in r.nodes)
    assert all(b > a_ for a_, b in zip(r.nodes, r.nodes[1:]))
    for k in range(2 * npts):
        exact = math.exp(math.lgamma(a + k + 1))
        got = r.integrate([x**k for x in r.nodes])
        assert got == pytest.approx(exact, rel=1e-11)


@pytest.mark.parametrize("a", [-0.5, 0.0, 1.25, 4.0])
def test_rule_matches_scipy(a):
    x, w = special.roots_genlaguerre(12, a)
    r = gauss_laguerre_rule(a, 12)
    assert np.array(r.nodes) == pytest.approx(x, rel=1e-12)
    assert np.array(r.weights) == pytest.approx(w, rel=1e-10)


@pytest.mark.parametrize("a", [-1.0, -2.5])
def test_rule_domain(a):
    with pytest.raises(DomainDiverges):
        gauss_laguerre_rule(a, 3)


def test_f11_recurrence_matches_horner():
    r = np.linspace(0.0, 25.0, 11)
    F = f11_recurrence(10, 2.7, r)
    for n in range(11):
        for j, rv in enumerate(r):
            ref = f11_eval(n, 2.7, rv)
            assert F[n, j] == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, abs(F[n]).max()))


@pytest.mark.parametrize("fn", [matel_termwise, matel_quadrature])
def test_oracle_examples(fn):
    ho = BasisParams(0.0, 1.0)
    assert fn(MatElemQuery(0, 0, 1.0, ho)) == pytest.approx(2 / SQPI, rel=1e-12)
    assert fn(MatElemQuery(1, 1, 1.0, ho)) == pytest.approx(5 / (3 * SQPI), rel=1e-12)
    assert fn(MatElemQuery(2, 2, 0.0, ho)) == pytest.approx(1.0, rel=1e-12)
    assert fn(MatElemQuery(2, 4, 0.0, ho)) == pytest.approx(0.0, abs=1e-12)


def test_quadrature_regression_value():
    q = MatElemQuery(2, 3, 1.5, BasisParams(0.5, 2.0))
    assert matel_quadrature(q) == pytest.approx(-0.777136322365715, rel=1e-12)
    assert matel_termwise(q) == pytest.approx(-0.777136322365715, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 10),
    st.integers(0, 10),
    st.floats(0.0, 0.999),
    st.floats(0.0, 10.0),
    st.floats(0.25, 4.0),
)
def test_oracles_agree(m, n, frac, A, B):
    p = BasisParams(A, B)
    q = MatElemQuery(m, n, frac * p.alpha_max, p)
    t = matel_termwise(q)
    assert matel_quadrature(q) == pytest.approx(t, rel=1e-10, abs=1e-13)
    assert matel_gk(q) == pytest.approx(t, rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("fn", [matel_termwise, matel_quadrature])
def test_oracles_refuse_divergent_alpha(fn):
    p = BasisParams(0.5, 1.0)
    q = MatElemQuery(0, 0, 1.0, p)
    object.__setattr__(q, "alpha", p.alpha_max)
    with pytest.raises(DomainDiverges):
        fn(q)


def test_quadrature_exponent_condition_matches_domain():
    # a = gamma - 1 - alpha/2 > -1  <=>  alpha < 2 gamma
    for A in (0.0, 0.5, 2.0, 10.0):
        p = BasisParams(A, 1.0)
        ok = math.nextafter(p.alpha_max, 0.0)
        gauss_laguerre_rule(p.gamma_p - 1 - 0.5 * ok, 2)
        with pytest.raises(DomainDiverges):
            gauss_laguerre_rule(p.gamma_p - 1 - 0.5 * p.alpha_max, 2)


@pytest.mark.parametrize("A, B", [(0.0, 1.0), (2.0, 0.25), (10.0, 4.0)])
def test_raw_overlap_closed_form(A, B):
    p = BasisParams(A, B)
    g, lam = p.gamma_p, p.lam
    for n in range(9):
        poch = math.prod(g + i for i in range(n))
        exact = 0.5 * math.factorial(n) * math.gamma(g) / (lam**g * poch)
        assert raw_overlap_integral(p, n, n) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("A, B", [(0.0, 1.0), (0.5, 4.0), (10.0, 0.25)])
def test_overlap_is_kronecker(A, B):
    p = BasisParams(A, B)
    for m in range(13):
        for n in range(13):
            assert overlap_quadrature(p, m, n) == pytest.approx(float(m == n), abs=1e-10)


@pytest.mark.parametrize("A, B", [(0.0, 1.0), (2.0, 2.5)])
def test_parseval_basis_functions(A, B):
    p = BasisParams(A, B)
    assert parseval_partial(p, "psi0", 0) == pytest.approx(1.0, abs=1e-10)
    s, norm = parseval_sequence(p, "psi0+psi2", 5)
    assert norm == 2.0
    assert s[1] == pytest.approx(1.0, abs=1e-10)
    assert s[2:] == pytest.approx([2.0] * 4, abs=1e-10)


def test_parseval_projection_of_psi_is_unit_vector():
    c = projection_coefficients(BasisParams(0.5, 1.0), "psi0", 6)
    assert c == pytest.approx([1.0] + [0.0] * 6, abs=1e-10)


@pytest.mark.parametrize("f", ["x_exp", "gauss"])
@pytest.mark.parametrize("A", [0.0, 2.0])
def test_parseval_monotone_and_bounded(f, A):
    s, norm = parseval_sequence(BasisParams(A, 1.0), f, 40)
    assert np.all(np.diff(s) >= 0.0)
    assert s[-1] <= norm + 1e-9
    assert s[-1] > 0.99 * norm


def test_parseval_x_exp_regression():
    s, norm = parseval_sequence(BasisParams(0.0, 1.0), "x_exp", 40)
    assert norm == 0.25
    assert s[40] == pytest.approx(0.24999857293968444, rel=1e-9)


def test_gauss_norm_matches_projection_of_full_series():
    # x**(gamma-1/2) exp(-x**2) has a fast-converging expansion
    p = BasisParams(0.5, 1.0)
    s, norm = parseval_sequence(p, "gauss", 30)
    assert s[-1] == pytest.approx(norm, rel=1e-10)


def test_parseval_unknown_function():
    with pytest.raises(KeyError):
        parseval_partial(BasisParams(0.0, 1.0), "nope", 3)
    assert set(TEST_FUNCTIONS) == {"x_exp", "gauss", "psi0", "psi0+psi2"}
