"""High-precision special functions and truncated power series.

Riemann zeta and Gamma are delegated to mpmath; the polylogarithm series,
its Hurwitz-type expansion about ``z = 1``, generalized binomials and the
series algebra are implemented here.  Every public function takes an explicit
:class:`PrecisionConfig` and runs under its own working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import mpmath
from mpmath import mp

from .errors import (
    BranchError,
    DomainError,
    IntegerS,
    NonConvergence,
    NonzeroConstantTerm,
    OrderMismatch,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    QuadratureFailure,
)

GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionConfig:
    digits: int = 64
    series_cap: int = 10**6

    def __post_init__(self):
        if self.digits < 16:
            raise ValueError(f"digits must be >= 16, got {self.digits}")
        if self.series_cap < 10**3:
            raise ValueError(f"series_cap must be >= 1000, got {self.series_cap}")

    @property
    def eps(self):
        """Target absolute accuracy, ``10**-digits``."""
        return mpmath.mpf(10) ** (-self.digits)

    @property
    def half_eps(self):
        return mpmath.mpf(10) ** (-(self.digits // 2))

    def workdps(self, extra: int = 0):
        """Context manager setting mpmath to this precision plus guard digits."""
        return mp.workdps(self.digits + GUARD_DIGITS + extra)

    def with_digits(self, digits: int) -> "PrecisionConfig":
        return PrecisionConfig(digits=digits, series_cap=self.series_cap)


DEFAULT_PRECISION = PrecisionConfig()


def _is_positive_integer(s) -> bool:
    s = mpmath.mpmathify(s)
    if isinstance(s, mpmath.mpc):
        if s.imag != 0:
            return False
        s = s.real
    return s >= 1 and mpmath.isint(s)


def _is_nonpositive_integer(s) -> bool:
    s = mpmath.mpmathify(s)
    if isinstance(s, mpmath.mpc):
        if s.imag != 0:
            return False
        s = s.real
    return s <= 0 and mpmath.isint(s)


def principal_power(z, a):
    """``z**a`` with the branch ``-pi < arg z <= pi``.

    All complex powers in the package go through this helper so that the
    branch convention lives in exactly one place.
    """
    z = mpmath.mpmathify(z)
    if z == 0:
        if mpmath.re(a) > 0:
            return mpmath.mpf(0)
        raise DomainError("0 ** a with Re(a) <= 0")
    return mpmath.exp(a * mpmath.log(z))


def riemann_zeta(s, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Riemann zeta at complex ``s`` (mpmath's Euler-Maclaurin / reflection)."""
    with prec.workdps():
        s = mpmath.mpmathify(s)
        if abs(s - 1) < mpmath.mpf(10) ** (-(prec.digits // 2)):
            raise PoleAtOne(f"zeta has a pole at s=1 (s={s})")
        return +mpmath.zeta(s)


def riemann_zeta_functional(s, prec: PrecisionConfig = DEFAULT_PRECISION):
    """zeta(s) through the functional equation.

    ``zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)``; only used as an
    independent consistency route for :func:`riemann_zeta`.
    """
    with prec.workdps():
        s = mpmath.mpmathify(s)
        if abs(s - 1) < mpmath.mpf(10) ** (-(prec.digits // 2)):
            raise PoleAtOne(f"zeta has a pole at s=1 (s={s})")
        if _is_positive_integer(1 - s) is False and _is_positive_integer(s):
            # Gamma(1-s) has a pole; the sine factor cancels it only in the limit
            raise DomainError("functional equation is singular at positive integers")
        return (
            mpmath.power(2, s)
            * mpmath.power(mpmath.pi, s - 1)
            * mpmath.sinpi(s / 2)
            * mpmath.gamma(1 - s)
            * mpmath.zeta(1 - s)
        )


def gamma(s, prec: PrecisionConfig = DEFAULT_PRECISION):
    with prec.workdps():
        s = mpmath.mpmathify(s)
        if _is_nonpositive_integer(s):
            raise PoleAtNonpositiveInteger(f"Gamma has a pole at s={s}")
        return +mpmath.gamma(s)


def polylog(s, z, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Li_s(z) by its defining series, for ``|z| < 1`` only."""
    with prec.workdps():
        s = mpmath.mpmathify(s)
        z = mpmath.mpmathify(z)
        az = abs(z)
        if az >= 1:
            raise DomainError(f"polylog series needs |z| < 1, got |z|={mpmath.nstr(az, 10)}")
        if z == 0:
            return mpmath.mpf(0)
        tol = mpmath.mpf(10) ** (-(prec.digits + 2))
        # |z^k k^-s| increases until k ~ -Re(s)/log|z|; never stop before that
        k_peak = max(1, int(math.ceil(float(-mpmath.re(s) / mpmath.log(az)))))
        total = mpmath.mpf(0)
        zk = mpmath.mpf(1)
        for k in range(1, prec.series_cap + 1):
            zk *= z
            term = zk / mpmath.power(k, s)
            total += term
            if k > k_peak and abs(term) < tol * max(1, abs(total)):
                return total
        raise NonConvergence(f"polylog series did not converge in {prec.series_cap} terms")


def polylog_via_identity(s, mu, K: int = 200, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Li_s(e^mu) = Gamma(1-s) (-mu)^(s-1) + sum_k zeta(s-k) mu^k / k!.

    Valid for ``|mu| < 2 pi`` and ``s`` not a positive integer.  The zeta sum is
    truncated at ``K`` or earlier, once three consecutive terms fall below
    ``10**-(digits+4)``.
    """
    with prec.workdps():
        s = mpmath.mpmathify(s)
        mu = mpmath.mpmathify(mu)
        if _is_positive_integer(s):
            raise IntegerS(f"identity requires s not in {{1,2,3,...}}, got {s}")
        if abs(mu) >= 2 * mpmath.pi:
            raise DomainError("identity requires |mu| < 2 pi")
        if mu == 0:
            if mpmath.re(s) < 1:
                raise DomainError("(-mu)^(s-1) diverges at mu=0 when Re(s) < 1")
            singular = mpmath.mpf(0)
        else:
            tol = mpmath.mpf(10) ** (-(prec.digits // 2))
            if mpmath.re(mu) > 0 and 0 < abs(mpmath.im(mu)) < tol:
                raise BranchError("-mu lies on the branch cut to within tolerance")
            singular = mpmath.gamma(1 - s) * principal_power(-mu, s - 1)
        small = mpmath.mpf(10) ** (-(prec.digits + 4))
        total = mpmath.mpf(0)
        run = 0
        term_pow = mpmath.mpf(1)
        for k in range(0, K + 1):
            if k > 0:
                term_pow = term_pow * mu / k
            term = mpmath.zeta(s - k) * term_pow
            total += term
            run = run + 1 if abs(term) < small else 0
            if run >= 3:
                break
        return singular + total


def gen_binom(a, k: int, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Generalized binomial ``a(a-1)...(a-k+1)/k!``.

    Exact (a ``Fraction``) when ``a`` is an int or Fraction, else an mpmath number.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(a, (int, Fraction)):
        out = Fraction(1)
        for i in range(k):
            out = out * (a - i) / (i + 1)
        return out
    with prec.workdps():
        a = mpmath.mpmathify(a)
        out = mpmath.mpf(1)
        for i in range(k):
            out = out * (a - i) / (i + 1)
        return out


def _is_zero(c) -> bool:
    if isinstance(c, TruncatedSeries):
        return c.is_zero()
    return c == 0


@dataclass
class TruncatedSeries:
    """Power series ``sum coeffs[k] var^k`` truncated at ``order``.

    Coefficients may be any ring elements supporting ``+`` and ``*``: mpmath
    numbers, Fractions, or other TruncatedSeries (used for bivariate algebra).
    """

    var_name: str
    coeffs: list = field(default_factory=list)
    order: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")
        coeffs = list(self.coeffs)[: self.order + 1]
        zero = self._zero_like(coeffs)
        coeffs += [zero] * (self.order + 1 - len(coeffs))
        self.coeffs = coeffs

    @staticmethod
    def _zero_like(coeffs):
        for c in coeffs:
            if isinstance(c, TruncatedSeries):
                return TruncatedSeries(c.var_name, [], c.order)
            if isinstance(c, Fraction):
                return Fraction(0)
        return 0

    @classmethod
    def variable(cls, var_name: str, order: int, one: Any = 1) -> "TruncatedSeries":
        return cls(var_name, [0 * one, one], order)

    @classmethod
    def constant(cls, var_name: str, order: int, value: Any) -> "TruncatedSeries":
        return cls(var_name, [value], order)

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def _check(self, other: "TruncatedSeries"):
        if self.var_name != other.var_name or self.order != other.order:
            raise OrderMismatch(
                f"series ({self.var_name}, {self.order}) vs ({other.var_name}, {other.order})"
            )

    def __add__(self, other):
        if isinstance(other, TruncatedSeries) and other.var_name == self.var_name:
            self._check(other)
            return TruncatedSeries(
                self.var_name, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order
            )
        coeffs = list(self.coeffs)
        coeffs[0] = coeffs[0] + other
        return TruncatedSeries(self.var_name, coeffs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var_name, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries) and other.var_name == self.var_name:
            return series_mul(self, other)
        return TruncatedSeries(self.var_name, [c * other for c in self.coeffs], self.order)

    def __rmul__(self, other):
        return TruncatedSeries(self.var_name, [other * c for c in self.coeffs], self.order)

    def __truediv__(self, scalar):
        return TruncatedSeries(self.var_name, [c / scalar for c in self.coeffs], self.order)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (
                self.var_name == other.var_name
                and self.order == other.order
                and self.coeffs == other.coeffs
            )
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __call__(self, value):
        """Horner evaluation of the stored polynomial."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc


def series_mul(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order; zero coefficients are skipped."""
    x._check(y)
    n = x.order
    zero = TruncatedSeries._zero_like(x.coeffs + y.coeffs)
    out = [zero] * (n + 1)
    ynz = [(j, b) for j, b in enumerate(y.coeffs) if not _is_zero(b)]
    for i, a in enumerate(x.coeffs):
        if _is_zero(a):
            continue
        for j, b in ynz:
            if i + j > n:
                break
            out[i + j] = out[i + j] + a * b
    return TruncatedSeries(x.var_name, out, n)


def series_exp(x: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term.

    Uses ``E' = x' E``, i.e. ``E_n = (1/n) sum_{k=1}^n k x_k E_{n-k}``.
    """
    if not _is_zero(x.coeffs[0]):
        raise NonzeroConstantTerm("series_exp requires a zero constant term")
    n = x.order
    zero = TruncatedSeries._zero_like(x.coeffs)
    one = zero + 1
    out = [one] + [zero] * n
    for m in range(1, n + 1):
        acc = zero
        for k in range(1, m + 1):
            if _is_zero(x.coeffs[k]):
                continue
            acc = acc + (k * x.coeffs[k]) * out[m - k]
        out[m] = acc * (Fraction(1, m) if _exact(acc) else mpmath.mpf(1) / m)
    return TruncatedSeries(x.var_name, out, n)


def _exact(c) -> bool:
    if isinstance(c, TruncatedSeries):
        return all(_exact(v) for v in c.coeffs)
    return isinstance(c, (int, Fraction))


def truncated_exp(x: TruncatedSeries, terms: int) -> TruncatedSeries:
    """``sum_{j=0}^{terms} x^j / j!`` computed by repeated multiplication."""
    if not _is_zero(x.coeffs[0]):
        raise NonzeroConstantTerm("truncated_exp requires a zero constant term")
    zero = TruncatedSeries._zero_like(x.coeffs)
    total = TruncatedSeries(x.var_name, [zero + 1], x.order)
    power = total
    for j in range(1, terms + 1):
        power = series_mul(power, x)
        if power.is_zero():
            break
        inv = Fraction(1, j) if _exact(power) else mpmath.mpf(1) / j
        power = power * inv
        total = total + power
    return total


def cahen_mellin_check(x, c, T, prec: PrecisionConfig = PrecisionConfig(digits=30)):
    """|(1/2 pi i) int_{c-iT}^{c+iT} Gamma(s) x^{-s} ds - e^{-x}|.

    The vertical segment is split into unit panels for Gauss-Legendre quadrature.
    """
    if T < 50:
        raise ValueError("T must be >= 50")
    with prec.workdps():
        x = mpmath.mpmathify(x)
        c = mpmath.mpf(c)
        if mpmath.re(x) <= 0 or c <= 0:
            raise ValueError("need Re(x) > 0 and c > 0")
        logx = mpmath.log(x)

        def integrand(t):
            s = mpmath.mpc(c, t)
            return mpmath.gamma(s) * mpmath.exp(-s * logx)

        T = int(T)
        nodes = [mpmath.mpf(t) for t in range(-T, T + 1)]
        try:
            value, err = mpmath.quad(integrand, nodes, method="gauss-legendre", error=True)
        except Exception as exc:  # mpmath raises bare exceptions on failure
            raise QuadratureFailure(str(exc)) from exc
        if not mpmath.isfinite(abs(value)):
            raise QuadratureFailure("non-finite quadrature result")
        value = value / (2 * mpmath.pi)
        return abs(value - mpmath.exp(-x))


def as_mpf_list(values: Sequence, prec: PrecisionConfig = DEFAULT_PRECISION) -> list:
    with prec.workdps():
        return [mpmath.mpmathify(v) for v in values]
