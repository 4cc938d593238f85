from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polypart.errors import (
    BranchError,
    DomainError,
    IntegerS,
    NonConvergence,
    NonzeroConstantTerm,
    OrderMismatch,
    PoleAtNonpositiveInteger,
    PoleAtOne,
)
from polypart.specfun import (
    DEFAULT_PRECISION,
    PrecisionConfig,
    TruncatedSeries,
    cahen_mellin_check,
    gamma,
    gen_binom,
    polylog,
    polylog_via_identity,
    riemann_zeta,
    riemann_zeta_functional,
    series_exp,
    series_mul,
)

P = DEFAULT_PRECISION
TIGHT = mpmath.mpf(10) ** -(P.digits - 5)


def close(a, b, tol):
    with mpmath.workdps(P.digits + 10):
        return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) < tol


def test_precision_config_bounds():
    with pytest.raises(ValueError):
        PrecisionConfig(digits=8)
    with pytest.raises(ValueError):
        PrecisionConfig(series_cap=10)
    assert PrecisionConfig(digits=20).with_digits(40).digits == 40


def test_zeta_classical_values():
    with mpmath.workdps(80):
        assert close(riemann_zeta(2), mpmath.pi**2 / 6, TIGHT)
        assert close(riemann_zeta(0), -0.5, TIGHT)
        assert close(riemann_zeta(-1), mpmath.mpf(-1) / 12, TIGHT)


def test_zeta_pole():
    with pytest.raises(PoleAtOne):
        riemann_zeta(1)


@settings(max_examples=25, deadline=None)
@given(st.floats(-6, 6), st.floats(-20, 20))
def test_zeta_functional_equation_consistency(re, im):
    s = mpmath.mpc(re, im)
    if abs(s - 1) < 0.05 or abs(s) < 0.05:
        return
    with mpmath.workdps(80):
        a = riemann_zeta(s)
        b = riemann_zeta_functional(s)
        assert abs(a - b) <= TIGHT * max(1, abs(a))


def test_gamma_values():
    with mpmath.workdps(80):
        assert close(gamma(mpmath.mpf(1) / 2), mpmath.sqrt(mpmath.pi), TIGHT)
        assert close(gamma(5), 24, TIGHT)
        assert close(gamma(mpmath.mpf(1) / 3), mpmath.mpf("2.678938534707747633655692940974677644128689377957301100950428"), TIGHT)
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma(-3)


@settings(max_examples=30, deadline=None)
@given(st.floats(-8, 8), st.floats(-10, 10))
def test_gamma_recurrence(re, im):
    s = mpmath.mpc(re, im)
    if im == 0 and (abs(re - round(re)) < 1e-6 and re <= 0.5):
        return
    with mpmath.workdps(80):
        lhs = gamma(s + 1)
        rhs = s * gamma(s)
        assert abs(lhs - rhs) <= TIGHT * max(1, abs(lhs))


def test_polylog_values():
    with mpmath.workdps(80):
        assert close(polylog(1, mpmath.mpf(1) / 2), mpmath.log(2), TIGHT)
        assert close(polylog(2, mpmath.mpf(1) / 2), mpmath.pi**2 / 12 - mpmath.log(2) ** 2 / 2, TIGHT)
        assert polylog(3, 0) == 0


def test_polylog_errors():
    with pytest.raises(DomainError):
        polylog(2, 1)
    with pytest.raises(NonConvergence):
        polylog(2, mpmath.mpf("0.9999"), PrecisionConfig(digits=30, series_cap=1000))


def test_polylog_identity_examples():
    tol = mpmath.mpf(10) ** -(P.digits // 2)
    with mpmath.workdps(80):
        half = mpmath.mpf(1) / 2
        assert close(polylog_via_identity(half, -1, 40), polylog(half, mpmath.exp(-1)), tol)
        a = polylog_via_identity(mpmath.mpf(3) / 2, mpmath.mpf("-0.1"))
        assert close(a, polylog(mpmath.mpf(3) / 2, mpmath.exp(mpmath.mpf("-0.1"))), tol)


def test_polylog_identity_errors():
    with pytest.raises(IntegerS):
        polylog_via_identity(2, -0.5)
    with pytest.raises(DomainError):
        polylog_via_identity(mpmath.mpf(1) / 2, 0)
    with pytest.raises(DomainError):
        polylog_via_identity(mpmath.mpf(1) / 2, 7)
    with pytest.raises(BranchError):
        polylog_via_identity(mpmath.mpf(1) / 2, mpmath.mpc(0.5, 1e-40))


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 1.5), st.floats(-1, 1), st.floats(0.2, 0.95), st.floats(-3.1, 3.1))
def test_polylog_identity_property(sre, sim, r, arg):
    # |mu| < 1 with Re(mu) < 0 keeps the direct series in its domain
    with mpmath.workdps(80):
        mu = r * mpmath.expj(arg)
        if mpmath.re(mu) >= -0.05:
            return
        s = mpmath.mpc(sre, sim)
        if abs(sim) < 1e-9 and abs(sre - round(sre)) < 1e-6 and round(sre) >= 1:
            return
        lhs = polylog(s, mpmath.exp(mu))
        rhs = polylog_via_identity(s, mu)
        assert abs(lhs - rhs) <= mpmath.mpf(10) ** -(P.digits // 2) * max(1, abs(lhs))


def test_gen_binom():
    assert gen_binom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gen_binom(Fraction(5, 2), 3) == Fraction(5, 16)
    assert gen_binom(Fraction(7, 3), 0) == 1
    assert gen_binom(5, 2) == 10
    with mpmath.workdps(80):
        assert close(gen_binom(mpmath.mpf("0.5"), 2), mpmath.mpf(-1) / 8, TIGHT)


def test_series_exp_and_mul_examples():
    t = TruncatedSeries.variable("t", 3, Fraction(1))
    e = series_exp(t)
    assert e.coeffs == [1, 1, Fraction(1, 2), Fraction(1, 6)]
    a = TruncatedSeries("t", [Fraction(1), Fraction(1)], 2)
    b = TruncatedSeries("t", [Fraction(1), Fraction(-1)], 2)
    assert series_mul(a, b).coeffs == [1, 0, -1]
    two_t = TruncatedSeries("t", [Fraction(0), Fraction(2)], 2)
    assert series_exp(two_t).coeffs == [1, 2, 2]


def test_series_errors():
    a = TruncatedSeries("t", [1, 1], 2)
    with pytest.raises(OrderMismatch):
        series_mul(a, TruncatedSeries("t", [1], 3))
    with pytest.raises(OrderMismatch):
        series_mul(a, TruncatedSeries("u", [1], 2))
    with pytest.raises(NonzeroConstantTerm):
        series_exp(a)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=6))
def test_exp_times_exp_neg_is_one(cs):
    order = len(cs)
    x = TruncatedSeries("t", [Fraction(0)] + cs, order)
    prod = series_mul(series_exp(x), series_exp(-x))
    assert prod.coeffs == [1] + [0] * order


def test_cahen_mellin():
    assert cahen_mellin_check(1, 1, 200) < 1e-10
    assert cahen_mellin_check(mpmath.mpc(2, 1), mpmath.mpf("0.51"), 200) < 1e-8
    assert cahen_mellin_check(1, 1, 200) < cahen_mellin_check(1, 1, 50)
