from __future__ import annotations

import json
import random
from fractions import Fraction

import mpmath
import pytest

from polypart.errors import DomainError, InsufficientDepth, NearPole, NegativeAlpha
from polypart.mwzeta import (
    build_context,
    dump_json,
    mw_zeta,
    mw_zeta_deriv_zero,
    mw_zeta_direct,
    mw_zeta_residue,
    mw_zeta_zero,
    residue_by_limit,
    zeta_zero_exact,
)
from polypart.specfun import DEFAULT_PRECISION

HALF_EPS = mpmath.mpf(10) ** -(DEFAULT_PRECISION.digits // 2)
HALF = mpmath.mpf(1) / 2


@pytest.fixture(scope="module")
def ctx_sq():
    return build_context([0], 2)


@pytest.fixture(scope="module")
def ctx_half():
    return build_context([HALF], 2)


@pytest.fixture(scope="module")
def ctx_cubic():
    return build_context([0, HALF], 3)


def test_e_coefficients(ctx_sq, ctx_half, ctx_cubic):
    with mpmath.workdps(80):
        for s in (mpmath.mpf("0.3"), mpmath.mpc(1, 2)):
            assert ctx_sq.e(0, s) == 1 and ctx_half.e(0, s) == 1
            for k in range(1, 6):
                assert ctx_sq.e(k, s) == 0
            assert abs(ctx_half.e(1, s) + s / 2) < HALF_EPS
            assert abs(ctx_cubic.e(1, s) + s / 2) < HALF_EPS


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_e_k_is_polynomial_of_degree_k(ctx_cubic, k):
    # k+1 samples determine a degree-k polynomial; a (k+2)-th sample must lie on it
    with mpmath.workdps(80):
        xs = [mpmath.mpf(i) / 3 - 1 for i in range(k + 2)]
        ys = [ctx_cubic.e(k, x) for x in xs]
        target = xs[-1]
        pred = mpmath.mpf(0)
        for i in range(k + 1):
            w = mpmath.mpf(1)
            for j in range(k + 1):
                if j != i:
                    w *= (target - xs[j]) / (xs[i] - xs[j])
            pred += w * ys[i]
        assert abs(pred - ys[-1]) < HALF_EPS


def test_direct_examples():
    with mpmath.workdps(80):
        v, err = mw_zeta_direct([0], 1)
        assert abs(v - mpmath.zeta(2)) < HALF_EPS and err < HALF_EPS
        v, _ = mw_zeta_direct([HALF], 1)
        assert abs(v - 2 * (2 - 2 * mpmath.log(2))) < HALF_EPS
        # sum 1/(n (n+1)^2) = 2 - zeta(2) by partial fractions
        v, _ = mw_zeta_direct([1, 1], 1)
        assert abs(v - (2 - mpmath.zeta(2))) < HALF_EPS
    with pytest.raises(DomainError):
        mw_zeta_direct([0], mpmath.mpf("0.52"))


def test_continuation_examples(ctx_sq, ctx_half):
    with mpmath.workdps(80):
        assert abs(mw_zeta(ctx_half, 0) + mpmath.mpf(3) / 4) < HALF_EPS
        assert abs(mw_zeta(ctx_sq, -1)) < HALF_EPS
        assert abs(mw_zeta(ctx_sq, mpmath.mpf("0.3")) - mpmath.zeta(mpmath.mpf("0.6"))) < HALF_EPS


def test_continuation_matches_direct(ctx_cubic):
    rng = random.Random(1)
    with mpmath.workdps(80):
        for _ in range(4):
            s = mpmath.mpc(rng.uniform(1 / 3 + 0.1, 2), rng.uniform(-5, 5))
            direct, _ = mw_zeta_direct(ctx_cubic.alphas, s)
            assert abs(mw_zeta(ctx_cubic, s) - direct) < HALF_EPS


def test_errors(ctx_sq):
    with pytest.raises(NegativeAlpha):
        build_context([-HALF], 2)
    with pytest.raises(NearPole):
        mw_zeta(ctx_sq, HALF)
    with pytest.raises(InsufficientDepth):
        mw_zeta(ctx_sq, -30)


def test_residues(ctx_sq, ctx_half):
    assert mw_zeta_residue(ctx_sq, 0) == HALF
    assert mw_zeta_residue(ctx_sq, 2) == 0
    with mpmath.workdps(80):
        assert abs(mw_zeta_residue(ctx_half, 2) + mpmath.mpf(1) / 64) < HALF_EPS
        limits = residue_by_limit(ctx_half, 2)
        assert len(limits) == 4
        for v in limits:
            assert abs(v + mpmath.mpf(1) / 64) < mpmath.mpf(10) ** -16


def test_zero_values(ctx_sq, ctx_half, ctx_cubic):
    assert zeta_zero_exact(Fraction(1, 2), 3) == Fraction(-2, 3)
    with mpmath.workdps(80):
        assert abs(mw_zeta_zero(ctx_sq) + HALF) < HALF_EPS
        assert abs(mw_zeta_zero(ctx_half) + mpmath.mpf(3) / 4) < HALF_EPS
        assert abs(mw_zeta_zero(ctx_cubic) + mpmath.mpf(2) / 3) < HALF_EPS


def test_derivative_at_zero(ctx_sq, ctx_half):
    with mpmath.workdps(80):
        assert abs(mw_zeta_deriv_zero(ctx_sq) + mpmath.log(2 * mpmath.pi)) < HALF_EPS
        c3 = build_context([0, 0], 3)
        assert abs(mw_zeta_deriv_zero(c3) + 1.5 * mpmath.log(2 * mpmath.pi)) < HALF_EPS
        # finite-difference cross-check happens inside; a mismatch would raise
        assert mpmath.isfinite(mw_zeta_deriv_zero(ctx_half))


def test_depth_stability():
    deep = build_context([0, HALF], 3, K=60)
    shallow = build_context([0, HALF], 3, K=40)
    with mpmath.workdps(80):
        for s in (mpmath.mpf("-1.3"), mpmath.mpc("0.2", "3"), mpmath.mpf("0.9")):
            assert abs(mw_zeta(deep, s) - mw_zeta(shallow, s)) < HALF_EPS


def test_diagnostic_dump(ctx_cubic):
    data = json.loads(dump_json(ctx_cubic, 3))
    assert data["d"] == 3
    assert set(data) >= {"alphas", "d", "residues", "zeta0", "zeta0_prime"}
