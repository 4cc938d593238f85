"""The one-variable zeta function zeta(s, alpha) = sum_n n^-s prod_j (n + alpha_j)^-s.

Continuation is by expanding ``prod_j (1 + alpha_j/n)^-s = sum_k e_k(s) n^-k``
for ``n >= N`` (convergent once ``N > max alpha``), which gives

    zeta(s, alpha) = sum_{n<N} P(n)^-s + sum_{k<K} e_k(s) zeta_H(d s + k, N)

with ``P(n) = n prod (n + alpha_j)`` and a truncation error of order
``(max alpha / N)^K``.  Each e_k is a polynomial of degree <= k in s, obtained
from ``exp(-s L(t))`` with ``L(t) = sum_j log(1 + alpha_j t)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import (
    ClosedFormMismatch,
    DerivativeMismatch,
    DomainError,
    InsufficientDepth,
    NearPole,
    NegativeAlpha,
)
from .specfun import DEFAULT_PRECISION, GUARD_DIGITS, PrecisionConfig, TruncatedSeries, series_exp, series_mul

MAX_DEPTH = 64


@dataclass(frozen=True)
class MWZetaContext:
    alphas: tuple
    d: int
    K: int
    prec: PrecisionConfig
    # ek_cache[k][m] is the coefficient of s^m in e_k(s)
    ek_cache: tuple = field(repr=False)

    @property
    def alpha_max(self):
        return max(self.alphas, default=mpmath.mpf(0))

    @property
    def alpha_sum(self):
        return mpmath.fsum(self.alphas)

    def e(self, k: int, s, deriv: int = 0):
        """e_k(s) or its s-derivative of order ``deriv``."""
        if k < 0 or k >= len(self.ek_cache):
            raise InsufficientDepth(f"e_{k} is beyond the stored depth {len(self.ek_cache) - 1}")
        coeffs = self.ek_cache[k]
        acc = mpmath.mpf(0)
        for m in range(len(coeffs) - 1, deriv - 1, -1):
            fall = 1
            for i in range(deriv):
                fall *= m - i
            acc = acc * s + fall * coeffs[m]
        return acc

    def pole_tol(self):
        return mpmath.mpf(10) ** (-(self.prec.digits // 2))


def build_context(alphas, d: int, K: int = 40, prec: PrecisionConfig = DEFAULT_PRECISION) -> MWZetaContext:
    if K > MAX_DEPTH:
        raise InsufficientDepth(f"depth K={K} exceeds the cap {MAX_DEPTH}")
    if K < 1:
        raise ValueError("K must be >= 1")
    with prec.workdps():
        als = tuple(sorted(mpmath.mpf(a) for a in alphas))
        if len(als) != d - 1:
            raise ValueError(f"expected {d - 1} alphas for d={d}, got {len(als)}")
        for a in als:
            if a < 0:
                raise NegativeAlpha(f"alpha = {a} < 0")
        order = K  # keep e_0..e_K; e_K only feeds the truncation estimate
        # L(t) = sum_j log(1 + a_j t), coefficients (-1)^(k+1) p_k / k
        lcoef = [mpmath.mpf(0)]
        for k in range(1, order + 1):
            pk = mpmath.fsum(a**k for a in als)
            lcoef.append((-1) ** (k + 1) * pk / k)
        L = TruncatedSeries("t", lcoef, order)
        table = [[mpmath.mpf(0)] * (k + 1) for k in range(order + 1)]
        table[0][0] = mpmath.mpf(1)
        power = TruncatedSeries("t", [mpmath.mpf(1)], order)
        fact = mpmath.mpf(1)
        for m in range(1, order + 1):
            power = series_mul(power, L)
            fact *= m
            if power.is_zero():
                break
            sign = (-1) ** m
            for k in range(m, order + 1):
                table[k][m] = sign * power.coeffs[k] / fact
        ek = tuple(tuple(row) for row in table)
        return MWZetaContext(als, d, K, prec, ek)


def _pole_candidates(ctx: MWZetaContext):
    """(m, location) for every candidate pole the depth-K expansion can see."""
    yield 0, mpmath.mpf(1) / ctx.d
    for m in range(1, ctx.K):
        yield m, mpmath.mpf(1 - m) / ctx.d


def _choose_N(ctx: MWZetaContext, s) -> int:
    amax = ctx.alpha_max
    if amax == 0:
        return 1
    target = mpmath.mpf(10) ** (-(ctx.prec.digits + GUARD_DIGITS))
    N = max(8, int(mpmath.ceil(2 * amax)) + 2)
    sr = mpmath.re(ctx.d * s)
    for _ in range(200):
        # next omitted term of the n >= N expansion, summed over n >= N
        expo = sr + ctx.K
        tail = abs(ctx.e(ctx.K, s)) * mpmath.power(N, 1 - expo) / max(expo - 1, mpmath.mpf("0.05"))
        head = mpmath.power(N, max(-sr, 0) + 1)
        if tail < target and tail < target * head:
            return N
        N = int(N * 1.5) + 1
    return N


def _hurwitz_term(ctx: MWZetaContext, k: int, s, N: int, with_deriv: bool = False):
    """e_k(s) zeta_H(ds+k, N) (and its s-derivative), removable point handled."""
    d = ctx.d
    z = d * s + k
    eps = z - 1
    if abs(eps) < ctx.pole_tol():
        s0 = mpmath.mpf(1 - k) / d
        e0 = ctx.e(k, s0)
        if abs(e0) >= ctx.pole_tol():
            raise NearPole(f"s={s} is within tolerance of the pole at {s0}")
        e1 = ctx.e(k, s0, 1)
        e2 = ctx.e(k, s0, 2)
        psiN = mpmath.digamma(N)
        delta = s - s0
        val = e1 / d + delta * (e2 / (2 * d) - e1 * psiN)
        if not with_deriv:
            return val
        return val, e2 / (2 * d) - e1 * psiN
    ek = ctx.e(k, s)
    if ek == 0 and not with_deriv:
        return mpmath.mpf(0)
    hz = mpmath.zeta(z, N)
    if not with_deriv:
        return ek * hz
    dek = ctx.e(k, s, 1)
    return ek * hz, dek * hz + d * ek * mpmath.zeta(z, N, 1)


def _check_poles(ctx: MWZetaContext, s):
    tol = ctx.pole_tol()
    for m, loc in _pole_candidates(ctx):
        if abs(s - loc) < tol and mw_zeta_residue(ctx, m) != 0:
            raise NearPole(f"s={s} is within {tol} of the pole at {loc}")


def _extra_digits(ctx: MWZetaContext, s, N: int) -> int:
    sr = float(mpmath.re(ctx.d * s))
    extra = 0
    if sr < 0:
        extra += int(math.ceil(-sr * math.log10(max(N, 2)))) + 5
    extra += int(math.log10(1 + abs(complex(s)))) * 2
    return extra


def mw_zeta(ctx: MWZetaContext, s):
    """zeta(s, alpha) by the depth-K expansion (meromorphic in s)."""
    with ctx.prec.workdps():
        s = mpmath.mpmathify(s)
        if mpmath.re(ctx.d * s) + ctx.K <= 1.05:
            raise InsufficientDepth(f"Re(ds)+K = {mpmath.re(ctx.d * s) + ctx.K} <= 1.05")
        _check_poles(ctx, s)
        N = _choose_N(ctx, s)
        with mp.workdps(mp.dps + _extra_digits(ctx, s, N)):
            total = mpmath.mpf(0)
            for n in range(1, N):
                total += mpmath.exp(-s * _log_P(ctx, n))
            for k in range(ctx.K):
                total += _hurwitz_term(ctx, k, s, N)
        return +total


def _log_P(ctx: MWZetaContext, n):
    acc = mpmath.log(n)
    for a in ctx.alphas:
        acc += mpmath.log(n + a)
    return acc


def mw_zeta_with_derivative(ctx: MWZetaContext, s):
    with ctx.prec.workdps():
        s = mpmath.mpmathify(s)
        if mpmath.re(ctx.d * s) + ctx.K <= 1.05:
            raise InsufficientDepth("depth too small for this s")
        _check_poles(ctx, s)
        N = _choose_N(ctx, s)
        with mp.workdps(mp.dps + _extra_digits(ctx, s, N)):
            val = mpmath.mpf(0)
            der = mpmath.mpf(0)
            for n in range(1, N):
                lp = _log_P(ctx, n)
                t = mpmath.exp(-s * lp)
                val += t
                der -= lp * t
            for k in range(ctx.K):
                v, dv = _hurwitz_term(ctx, k, s, N, with_deriv=True)
                val += v
                der += dv
        return +val, +der


def mw_zeta_residue(ctx: MWZetaContext, m: int):
    """Residue c_m at s = 1/d (m = 0) or s = (1-m)/d (m >= 1)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    with ctx.prec.workdps():
        if m == 0:
            return mpmath.mpf(1) / ctx.d
        if (m - 1) % ctx.d == 0:
            # (1-m)/d is a nonpositive integer: the function is regular there
            return mpmath.mpf(0)
        if m > ctx.K:
            raise InsufficientDepth(f"residue index m={m} exceeds depth K={ctx.K}")
        em = ctx.e(m, mpmath.mpf(1 - m) / ctx.d)
        if abs(em) < ctx.pole_tol():
            return mpmath.mpf(0)
        return em / ctx.d


def residue_by_limit(ctx: MWZetaContext, m: int, h=None, directions: int = 4):
    """Numeric (s - p) zeta(s, alpha) at |s - p| = h along several directions."""
    with ctx.prec.workdps():
        p = mpmath.mpf(1) / ctx.d if m == 0 else mpmath.mpf(1 - m) / ctx.d
        if h is None:
            h = mpmath.mpf(10) ** (-(ctx.prec.digits // 3))
        out = []
        for j in range(directions):
            u = mpmath.expjpi(mpmath.mpf(2 * j + 1) / directions)
            s = p + h * u
            out.append((s - p) * mw_zeta(ctx, s))
        return out


def zeta_zero_closed_form(ctx: MWZetaContext):
    with ctx.prec.workdps():
        return -mpmath.mpf(1) / 2 - ctx.alpha_sum / ctx.d


def zeta_zero_exact(alphas_sum: Fraction, d: int) -> Fraction:
    """zeta(0, alpha) as a rational number from sum(alpha) = a_{d-1}/a_d."""
    return Fraction(-1, 2) - Fraction(alphas_sum) / d


def mw_zeta_zero(ctx: MWZetaContext):
    with ctx.prec.workdps():
        closed = zeta_zero_closed_form(ctx)
        cont = mw_zeta(ctx, 0)
        if abs(cont - closed) > ctx.pole_tol():
            raise ClosedFormMismatch(f"continuation {cont} vs closed form {closed}")
        return closed


def mw_zeta_deriv_zero(ctx: MWZetaContext):
    """zeta'(0, alpha): analytic differentiation, checked by a central difference."""
    with ctx.prec.workdps():
        _, analytic = mw_zeta_with_derivative(ctx, mpmath.mpf(0))
        h = mpmath.mpf(10) ** (-(ctx.prec.digits // 4))
        fd = (mw_zeta(ctx, h) - mw_zeta(ctx, -h)) / (2 * h)
        if abs(fd - analytic) > h:
            raise DerivativeMismatch(f"analytic {analytic} vs finite difference {fd}")
        return +analytic


def _log_P_series(alphas, x0, s, order: int) -> TruncatedSeries:
    """Taylor series in t of -s * log((x0+t) prod (x0+a+t))."""
    coeffs = [mpmath.mpf(0)] * (order + 1)
    for base in [x0] + [x0 + a for a in alphas]:
        inv = 1 / mpmath.mpf(base)
        p = inv
        for i in range(1, order + 1):
            coeffs[i] += (-1) ** (i + 1) * p / i
            p *= inv
    return TruncatedSeries("t", [-s * c for c in coeffs], order)


def mw_zeta_direct(alphas, s, N: int = 200, prec: PrecisionConfig = DEFAULT_PRECISION, em_terms: int = 12):
    """Partial sum to N plus an Euler-Maclaurin tail; returns (value, error bound).

    Independent of the continuation: the tail integral is done by quadrature and
    the derivative corrections come from the exact Taylor series of the summand.
    """
    als = [mpmath.mpf(a) for a in alphas]
    d = len(als) + 1
    with prec.workdps():
        s = mpmath.mpmathify(s)
        if mpmath.re(s) <= mpmath.mpf(1) / d + mpmath.mpf("0.05"):
            raise DomainError(f"direct series needs Re(s) > 1/d + 0.05, got {s}")

        def logp(x):
            acc = mpmath.log(x)
            for a in als:
                acc += mpmath.log(x + a)
            return acc

        def g(x):
            return mpmath.exp(-s * logp(x))

        partial = mpmath.fsum(g(n) for n in range(1, N))
        with mp.workdps(mp.dps + 10):
            integral, qerr = mpmath.quad(g, [N, 2 * N, 8 * N, mpmath.inf], error=True)
        # g(N + t) = exp(-s log P(N)) * exp(series without constant term)
        order = 2 * em_terms + 1
        ser = _log_P_series(als, N, s, order)
        e = series_exp(ser)
        g0 = g(N)
        derivs = [g0 * e.coeffs[r] * mpmath.factorial(r) for r in range(order + 1)]
        tail = integral + g0 / 2
        last = mpmath.mpf(0)
        for j in range(1, em_terms + 1):
            term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * derivs[2 * j - 1]
            tail -= term
            last = abs(term)
        return +(partial + tail), last + abs(qerr)


def diagnostic_dump(ctx: MWZetaContext, m_max: int = 5) -> dict:
    with ctx.prec.workdps():
        residues = {str(m): mpmath.nstr(mw_zeta_residue(ctx, m), 30) for m in range(0, m_max + 1)}
        return {
            "alphas": [mpmath.nstr(a, 30) for a in ctx.alphas],
            "d": ctx.d,
            "K": ctx.K,
            "residues": residues,
            "zeta0": mpmath.nstr(mw_zeta_zero(ctx), 30),
            "zeta0_prime": mpmath.nstr(mw_zeta_deriv_zero(ctx), 30),
        }


def dump_json(ctx: MWZetaContext, m_max: int = 5) -> str:
    return json.dumps(diagnostic_dump(ctx, m_max), indent=2)
