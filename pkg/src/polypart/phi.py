"""The generating log Phi_f(rho e(Theta)) = -sum_n log(1 - exp(-f(n) x)).

``x = (1 - 2 pi i Theta X) / X``.  :func:`phi_direct` sums the series; the
asymptotic side is ``A x^(-1/d) + zeta(0,alpha) log(1/(a_d x)) + W(Theta)``
where W is a finite combination of constants and powers ``x^p``.  Keeping W as
an explicit list of ``(coefficient, power)`` pairs makes its Theta-derivatives
exact: ``d/dTheta x^p = -2 pi i p x^(p-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .errors import (
    DerivativeMismatch,
    NonConvergentSeries,
    RatioNotLessThanOne,
    TailTooLarge,
    ThetaOutOfRange,
)
from .mwzeta import MWZetaContext, mw_zeta, mw_zeta_deriv_zero, mw_zeta_residue, zeta_zero_closed_form
from .poly import PolynomialSpec
from .specfun import DEFAULT_PRECISION, PrecisionConfig, principal_power

DEFAULT_R = 0.9
DEFAULT_L = 0.5


@dataclass(frozen=True)
class PhiPoint:
    X: object
    Theta: object
    rho: object
    x: object
    Delta: object

    @classmethod
    def make(cls, X, Theta, prec: PrecisionConfig = DEFAULT_PRECISION) -> "PhiPoint":
        with prec.workdps():
            X = mpmath.mpf(X)
            Theta = mpmath.mpf(Theta)
            x = mpmath.mpc(1, -2 * mpmath.pi * Theta * X) / X
            delta = 1 / mpmath.sqrt(1 + 4 * mpmath.pi**2 * X**2 * Theta**2)
            return cls(X, Theta, mpmath.exp(-1 / X), x, delta)


@dataclass(frozen=True)
class WValue:
    variant: str
    value: object
    truncation_orders: dict
    est_error: object


@dataclass(frozen=True)
class WSeries:
    """W(Theta) = const + sum coef * x^power."""

    variant: str
    const: object
    terms: tuple
    orders: dict = field(hash=False, compare=False)
    est_error: object = 0

    def value(self, x):
        total = self.const
        for c, p in self.terms:
            total += c * principal_power(x, p)
        return total

    def theta_derivative(self, x, r: int):
        """r-th derivative in Theta at the given x."""
        if r == 0:
            return self.value(x)
        factor = (-2j * mpmath.pi) ** r
        total = mpmath.mpf(0)
        for c, p in self.terms:
            fall = mpmath.mpf(1)
            for i in range(r):
                fall *= p - i
            if fall == 0:
                continue
            total += c * fall * principal_power(x, p - r)
        return factor * total

    def x_derivative_sum(self, X, r: int):
        """sum coef * falling(p, r) * X^(r - p), i.e. the x-derivative at x = 1/X times X^0."""
        total = mpmath.mpf(0)
        for c, p in self.terms:
            fall = mpmath.mpf(1)
            for i in range(r):
                fall *= p - i
            total += c * fall * mpmath.power(X, r - p)
        return total


def main_coefficient(spec: PolynomialSpec, prec: PrecisionConfig = DEFAULT_PRECISION):
    """A = a_d^(-1/d) Gamma(1/d) zeta(1+1/d) / d."""
    d = spec.degree
    with prec.workdps():
        inv = mpmath.mpf(1) / d
        return mpmath.power(spec.ad, -inv) / d * mpmath.gamma(inv) * mpmath.zeta(1 + inv)


@lru_cache(maxsize=64)
def _zeta_constants(ctx: MWZetaContext):
    return zeta_zero_closed_form(ctx), mw_zeta_deriv_zero(ctx)


@lru_cache(maxsize=256)
def _zeta_at_integer(ctx: MWZetaContext, m: int):
    """zeta(m, alpha) for integer m >= 1."""
    with ctx.prec.workdps():
        if ctx.d * m < 40:
            return mw_zeta(ctx, m)
        # P(n)^-m <= 2^-dm: a handful of terms is enough
        tol = mpmath.mpf(10) ** (-(ctx.prec.digits + 12))
        total = mpmath.mpf(1)
        for a in ctx.alphas:
            total *= mpmath.power(1 + a, -m)
        n = 2
        while True:
            p = mpmath.mpf(n)
            for a in ctx.alphas:
                p *= n + a
            term = mpmath.power(p, -m)
            total += term
            if term < tol * total:
                return total
            n += 1


def m_series_constant(spec: PolynomialSpec, ctx: MWZetaContext):
    """sum_{m>=1} (-1)^m (a_0/a_d)^m zeta(m, alpha) / m, with |a_0/a_d| < 1."""
    r = Fraction(spec.a0, spec.ad)
    if abs(r) >= 1:
        raise RatioNotLessThanOne(f"a_0/a_d = {r} is not < 1")
    prec = ctx.prec
    with prec.workdps():
        if r == 0:
            return mpmath.mpf(0), 0
        rr = mpmath.mpf(r.numerator) / r.denominator
        tol = mpmath.mpf(10) ** (-(prec.digits + 4))
        total = mpmath.mpf(0)
        run = 0
        for m in range(1, prec.series_cap):
            term = (-1) ** m * rr**m * _zeta_at_integer(ctx, m) / m
            total += term
            run = run + 1 if abs(term) < tol else 0
            if run >= 3:
                return total, m
        raise NonConvergentSeries("m-series did not converge")


def m_series_oracle(spec: PolynomialSpec, prec: PrecisionConfig = DEFAULT_PRECISION, n_max: int = 2000):
    """Same constant as -sum_n log(f(n) / (f(n) - a_0)), by direct summation."""
    with prec.workdps():
        term = lambda n: -mpmath.log(spec(n) / (spec(n) - spec.a0))
        head = mpmath.fsum(term(mpmath.mpf(n)) for n in range(1, n_max + 1))
        tail = mpmath.nsum(term, [n_max + 1, mpmath.inf], method="euler-maclaurin")
        return head + tail


def _power_sum(spec, ctx, coef_fn, power_fn, k0: int, xb, tag: str, terms: list, orders: dict):
    """Append coef_fn(k) x^power_fn(k) for k >= k0 until three small terms in a row."""
    prec = ctx.prec
    tol = mpmath.mpf(10) ** (-(prec.digits + 4))
    run = 0
    err = mpmath.mpf(0)
    scale = min(xb, 1)
    for k in range(k0, prec.series_cap):
        c = coef_fn(k)
        p = power_fn(k)
        mag = abs(c) * mpmath.power(xb, mpmath.re(p)) * (1 + abs(p)) ** 2 / scale**2
        if c != 0:
            terms.append((c, p))
        if mag < tol:
            run += 1
            err += mag
            if run >= 3:
                orders[tag] = k
                return err
        else:
            run = 0
    raise NonConvergentSeries(f"{tag} did not converge within {prec.series_cap} terms")


@lru_cache(maxsize=128)
def build_W(spec: PolynomialSpec, ctx: MWZetaContext, R: float, xb) -> WSeries:
    """All W terms, truncated for |x| <= xb."""
    prec = ctx.prec
    d = spec.degree
    a0, ad = spec.a0, spec.ad
    variant = "W1" if a0 != 0 else "W0"
    if a0 != 0 and Fraction(a0, ad) >= 1:
        raise RatioNotLessThanOne(f"a_0/a_d = {Fraction(a0, ad)} is not < 1")
    with prec.workdps():
        xb = mpmath.mpf(xb)
        if a0 != 0 and a0 * xb >= 2 * mpmath.pi:
            raise NonConvergentSeries("k-series needs |a_0 x| < 2 pi")
        zeta0, zeta0p = _zeta_constants(ctx)
        inv = mpmath.mpf(1) / d
        terms: list = []
        orders: dict = {}
        err = mpmath.mpf(0)
        const = zeta0p
        if a0 != 0:
            pre = mpmath.power(ad, -inv) / d * mpmath.gamma(inv)
            err += _power_sum(
                spec, ctx,
                lambda k: pre * (-1) ** k * mpmath.zeta(inv + 1 - k) / mpmath.factorial(k) * mpmath.mpf(a0) ** k,
                lambda k: k - inv,
                1, xb, "k_main", terms, orders,
            )
            mconst, morder = m_series_constant(spec, ctx)
            const += mconst
            orders["m_series"] = morder
            # residue of the zeta(0, alpha) Gamma(s) pole against the polylog zeta-series
            err += _power_sum(
                spec, ctx,
                lambda k: zeta0 * (-1) ** k * mpmath.zeta(1 - k) / mpmath.factorial(k) * mpmath.mpf(a0) ** k,
                lambda k: mpmath.mpf(k),
                1, xb, "k_zero", terms, orders,
            )
        mmax = int(math.floor(d * R + 1e-12))
        for m in range(1, mmax + 1):
            if m % d == 1 % d:
                continue
            cm = mw_zeta_residue(ctx, m)
            if cm == 0:
                continue
            sm = mpmath.mpf(1 - m) / d
            pre = cm * mpmath.gamma(sm) * mpmath.power(ad, -sm)
            if a0 == 0:
                terms.append((pre * mpmath.zeta(sm + 1), -sm))
                orders[f"residue_m{m}"] = 0
            else:
                err += _power_sum(
                    spec, ctx,
                    lambda k, pre=pre, sm=sm: pre * (-1) ** k * mpmath.zeta(sm + 1 - k)
                    / mpmath.factorial(k) * mpmath.mpf(a0) ** k,
                    lambda k, sm=sm: k - sm,
                    0, xb, f"residue_m{m}", terms, orders,
                )
        for m in range(1, int(math.floor(R + 1e-12)) + 1):
            zm = mw_zeta(ctx, -m)
            pre = (-1) ** m * mpmath.power(ad, m) * zm / mpmath.factorial(m)
            if a0 == 0:
                terms.append((pre * mpmath.zeta(1 - m), mpmath.mpf(m)))
                orders[f"negative_m{m}"] = 0
            else:
                err += _power_sum(
                    spec, ctx,
                    lambda k, pre=pre, m=m: pre * (-1) ** k * mpmath.zeta(1 - m - k)
                    / mpmath.factorial(k) * mpmath.mpf(a0) ** k,
                    lambda k, m=m: mpmath.mpf(k + m),
                    0, xb, f"negative_m{m}", terms, orders,
                )
        return WSeries(variant, const, tuple(terms), orders, err)


def _bucket(xabs) -> float:
    """Round |x| up to a power of two so nearby evaluations share a truncation."""
    e = math.ceil(math.log2(float(xabs)))
    return float(2.0**e)


def theta_limit(spec: PolynomialSpec, X, L: float = DEFAULT_L):
    return mpmath.power(X, mpmath.mpf(L) / spec.degree - 1)


def _check_theta(spec, X, Theta, L):
    if abs(Theta) > theta_limit(spec, X, L) * (1 + mpmath.mpf(10) ** -12):
        raise ThetaOutOfRange(f"|Theta| = {Theta} exceeds X^(L/d-1)")


def W_series(spec, ctx, X, Theta=0, R: float = DEFAULT_R) -> WSeries:
    pt = PhiPoint.make(X, Theta, ctx.prec)
    return build_W(spec, ctx, float(R), _bucket(abs(pt.x)))


def eval_W(spec, ctx, X, Theta, R: float = DEFAULT_R, L: float = DEFAULT_L, check_range: bool = True) -> WValue:
    with ctx.prec.workdps():
        if check_range:
            _check_theta(spec, mpmath.mpf(X), mpmath.mpf(Theta), L)
        pt = PhiPoint.make(X, Theta, ctx.prec)
        ws = build_W(spec, ctx, float(R), _bucket(abs(pt.x)))
        return WValue(ws.variant, ws.value(pt.x), dict(ws.orders), ws.est_error)


def phi_asymptotic(spec, ctx, X, Theta, R: float = DEFAULT_R, L: float = DEFAULT_L, check_range: bool = True):
    with ctx.prec.workdps():
        pt = PhiPoint.make(X, Theta, ctx.prec)
        w = eval_W(spec, ctx, X, Theta, R, L, check_range)
        zeta0, _ = _zeta_constants(ctx)
        A = main_coefficient(spec, ctx.prec)
        d = spec.degree
        main = A * principal_power(pt.x, -mpmath.mpf(1) / d)
        logterm = -zeta0 * (mpmath.log(spec.ad) + mpmath.log(pt.x))
        return main + logterm + w.value


def W_derivatives_at_zero(spec, ctx, X, order: int, R: float = DEFAULT_R, check: bool = True):
    """d^order W / dTheta^order at Theta = 0, checked by a central difference."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    prec = ctx.prec
    with prec.workdps():
        X = mpmath.mpf(X)
        x0 = 1 / X
        ws = build_W(spec, ctx, float(R), _bucket(2 * x0))
        analytic = ws.theta_derivative(mpmath.mpc(x0), order)
        if check:
            # step small relative to |x| so the O(h^2) error sits far below tolerance
            h = x0 * mpmath.mpf(10) ** (-(prec.digits // 4)) / (2 * mpmath.pi)
            xp = mpmath.mpc(x0, -2 * mpmath.pi * h)
            xm = mpmath.mpc(x0, 2 * mpmath.pi * h)
            if order == 1:
                fd = (ws.value(xp) - ws.value(xm)) / (2 * h)
            else:
                fd = (ws.value(xp) - 2 * ws.value(mpmath.mpc(x0)) + ws.value(xm)) / h**2
            tol = mpmath.mpf(10) ** (-(prec.digits // 4)) * max(1, abs(analytic))
            if abs(fd - analytic) > tol:
                raise DerivativeMismatch(f"analytic {analytic} vs finite difference {fd}")
        return analytic


def n_max_for(spec: PolynomialSpec, X, tol) -> int:
    """Smallest n_max with exp(-f(n)/X) < tol for all n > n_max."""
    target = mpmath.mpf(X) * mpmath.log(1 / mpmath.mpf(tol))
    n = 1
    while spec(n) <= target or spec.derivative(n) <= 0:
        n += 1
    return n


def phi_direct(spec, X, Theta, j_max: int | None = None, n_max: int | None = None,
               prec: PrecisionConfig = DEFAULT_PRECISION, return_bound: bool = False):
    """Direct evaluation of sum_j sum_n exp(-j f(n) x) / j.

    With ``j_max=None`` the j-sum is done in closed form, ``-log(1 - e^(-f(n)x))``.
    """
    with prec.workdps():
        pt = PhiPoint.make(X, Theta, prec)
        x = pt.x
        tol = mpmath.mpf(10) ** (-(prec.digits + 4))
        if n_max is None:
            n_max = n_max_for(spec, pt.X, tol)
        total = mpmath.mpf(0)
        if j_max is None:
            for n in range(1, n_max + 1):
                total -= mpmath.log(-mpmath.expm1(-spec(n) * x))
            jtail = mpmath.mpf(0)
        else:
            for n in range(1, n_max + 1):
                q = mpmath.exp(-spec(n) * x)
                qj = mpmath.mpf(1)
                for j in range(1, j_max + 1):
                    qj *= q
                    total += qj / j
            r1 = pt.rho ** spec(1)
            jtail = r1 ** (j_max + 1) / (1 - r1) * n_max
        # n-tail: sum_{n > n_max} rho^f(n) / (1 - rho^f(n)), bounded by a geometric series
        rn = pt.rho ** spec(n_max + 1)
        ntail = rn / ((1 - rn) * (1 - pt.rho))
        bound = ntail + jtail
        if bound > mpmath.mpf(10) ** (-(prec.digits // 2)):
            raise TailTooLarge(f"dropped tail bound {mpmath.nstr(bound, 5)} exceeds tolerance")
        if return_bound:
            return +total, bound
        return +total
