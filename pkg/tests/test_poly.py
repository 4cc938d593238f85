from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from polypart.errors import (
    ComplexRoot,
    DegreeTooSmall,
    GcdViolation,
    NegativeRootBelowMinusOne,
    NonPositiveLeading,
    OutOfRange,
)
from polypart.poly import (
    compute_roots,
    inverse_psi,
    nonconstant_mod,
    parse_polynomial,
    tol_root,
    validate_hypotheses,
)

TOL = tol_root()


def test_parse_examples():
    s = parse_polynomial([0, 0, 1])
    assert s.degree == 2 and s.coeffs == (0, 0, 1)
    assert parse_polynomial("0,0,1,2").degree == 3
    assert parse_polynomial([0, 1, 1]).coeffs == (0, 1, 1)
    assert parse_polynomial([0, 0, 1, 0, 0]).coeffs == (0, 0, 1)


@pytest.mark.parametrize(
    "coeffs, exc",
    [([0, 1], DegreeTooSmall), ([1, 0, 0], DegreeTooSmall), ([0, 0, -1], NonPositiveLeading), ([0, 2, 4], GcdViolation)],
)
def test_parse_errors(coeffs, exc):
    with pytest.raises(exc):
        parse_polynomial(coeffs)


def test_validate_examples():
    rep = validate_hypotheses(parse_polynomial("0,0,1"))
    assert rep.overall and rep.ratio_ad1_ad == 0
    rep = validate_hypotheses(parse_polynomial("0,0,1,2"))
    assert rep.overall and rep.ratio_ad1_ad == Fraction(1, 2)
    rep = validate_hypotheses(parse_polynomial("0,1,1"))
    assert not rep.overall and not rep.a1_zero
    assert rep.as_dict()["overall"] is False


def test_validate_flags_each_failure():
    assert not validate_hypotheses(parse_polynomial("7,0,5")).a0_over_ad_lt_1
    assert not validate_hypotheses(parse_polynomial("0,0,4,1")).ratio_lt_half_d
    # y^2 + y^3 style polynomial constant mod 2: y^2 (y+1) is always even
    assert not validate_hypotheses(parse_polynomial("0,0,1,1")).nonconstant_mod_small_primes


def test_roots_examples():
    assert compute_roots(parse_polynomial("0,0,0,1")).alphas == (0, 0)
    a = compute_roots(parse_polynomial("0,0,1,2")).alphas
    assert abs(a[0]) < TOL and abs(a[1] - mpmath.mpf(1) / 2) < TOL
    assert compute_roots(parse_polynomial("3,0,1")).alphas == (0,)


def test_roots_errors():
    with pytest.raises(ComplexRoot):
        compute_roots(parse_polynomial("0,0,1,0,1"))
    with pytest.raises(NegativeRootBelowMinusOne):
        compute_roots(parse_polynomial("1,0,-3,1"))


def test_inverse_psi_examples():
    with mpmath.workdps(80):
        assert abs(inverse_psi(parse_polynomial("0,0,1"), 16) - 4) < TOL
        assert abs(inverse_psi(parse_polynomial("0,0,1,2"), 3) - 1) < TOL
        assert abs(inverse_psi(parse_polynomial("0,0,1"), 2) - mpmath.sqrt(2)) < TOL
    with pytest.raises(OutOfRange):
        inverse_psi(parse_polynomial("3,0,5"), 2)


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


roots_strategy = st.lists(
    st.tuples(st.integers(0, 6), st.integers(1, 4)), min_size=1, max_size=3
)


@settings(max_examples=30, deadline=None)
@given(roots_strategy, st.integers(0, 3))
def test_reconstruction_property(roots, a0):
    # f = a0 + y * prod(den y + num): every alpha = num/den is a nonnegative rational
    poly = [0, 1]
    for num, den in roots:
        poly = _poly_mul(poly, [num, den])
    poly[0] += a0
    assume(reduce(math.gcd, poly) == 1)
    spec = parse_polynomial(poly)
    rd = compute_roots(spec)
    expected = sorted(Fraction(n, d) for n, d in roots)
    with mpmath.workdps(80):
        for got, want in zip(rd.alphas, expected):
            assert abs(got - mpmath.mpf(want.numerator) / want.denominator) < TOL
        rebuilt = [mpmath.mpf(0), mpmath.mpf(spec.ad)]
        for a in rd.alphas:
            rebuilt = _poly_mul(rebuilt, [a, 1])
        rebuilt[0] += a0
        for c_got, c_want in zip(rebuilt, spec.coeffs):
            assert abs(c_got - c_want) < TOL * max(1, abs(c_want))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["0,0,1", "0,0,1,2", "3,0,5", "0,0,0,1", "0,0,0,0,1"]),
       st.floats(0, 100), st.floats(0, 100))
def test_monotone_and_inverse(coeffs, x1, x2):
    spec = parse_polynomial(coeffs)
    with mpmath.workdps(80):
        lo, hi = sorted((mpmath.mpf(x1), mpmath.mpf(x2)))
        if hi - lo > 1e-6:
            assert spec(lo) < spec(hi)
        u = spec(hi)
        back = inverse_psi(spec, u)
        assert abs(spec(back) - u) <= TOL * max(1, u)
        if hi > 0.01:
            assert abs(back - hi) < TOL * max(1, hi)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=3, max_size=5), st.sampled_from([2, 3, 5, 7]))
def test_mod_p_flag_matches_brute_force(coeffs, p):
    coeffs[-1] = abs(coeffs[-1]) + 1
    assume(reduce(math.gcd, coeffs) == 1)
    spec = parse_polynomial(coeffs)
    brute = len({sum(c * y**k for k, c in enumerate(coeffs)) % p for y in range(p)}) > 1
    assert nonconstant_mod(spec, p) == brute
