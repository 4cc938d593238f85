"""Saddle point (X, Y), correction coefficients w_q and the assembled estimate.

With ``W(Theta) = const + sum_p c_p x^p`` at ``x = 1/X`` the stationarity
condition and the Gaussian width read

    n = (A/d) X^(1+1/d) + zeta0 X - sum_p c_p p X^(1-p)
    Y = A (d+1)/(2 d^2) X^(1/d) + zeta0/2 + (1/2) sum_p c_p p (p-1) X^(-p)

where ``A`` is the leading coefficient from :func:`phi.main_coefficient`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .errors import AdmissibleRangeWarning, NoBracket, NonConvergence
from .mwzeta import MWZetaContext
from .phi import DEFAULT_R, W_series, build_W, main_coefficient, phi_direct, _bucket
from .poly import PolynomialSpec
from .specfun import DEFAULT_PRECISION, PrecisionConfig, TruncatedSeries, gen_binom, truncated_exp

MAX_ITER = 200


@dataclass(frozen=True)
class SaddlePoint:
    n: int
    X: object
    Y: object
    C_main: object
    W0prime: object
    W0doubleprime: object
    solver_residual: object


@dataclass(frozen=True)
class AsymptoticExpansion:
    J: int
    w: tuple
    u: tuple
    v: tuple
    w_over_sqrt_pi: tuple = ()


@dataclass(frozen=True)
class KCheck:
    rel_mismatch: object
    kprime_over_n: object
    K2_numeric: object
    K2_model: object


def zeta0_exact(spec: PolynomialSpec) -> Fraction:
    d = spec.degree
    return Fraction(-1, 2) - Fraction(spec.coeffs[d - 1], spec.ad) / d


def default_J(d: int, R: float = DEFAULT_R) -> int:
    """Largest integer strictly below d R (at least 1)."""
    return max(1, math.ceil(d * R) - 1)


def _w_for(spec, ctx, X, R):
    return build_W(spec, ctx, float(R), _bucket(1 / mpmath.mpf(X)))


def saddle_rhs(spec: PolynomialSpec, ctx: MWZetaContext, X, R: float = DEFAULT_R):
    """Right side of the stationarity equation and its X-derivative."""
    d = spec.degree
    A = main_coefficient(spec, ctx.prec)
    z0 = zeta0_exact(spec)
    zeta0 = mpmath.mpf(z0.numerator) / z0.denominator
    ws = _w_for(spec, ctx, X, R)
    val = A / d * mpmath.power(X, 1 + mpmath.mpf(1) / d) + zeta0 * X
    der = A / d * (1 + mpmath.mpf(1) / d) * mpmath.power(X, mpmath.mpf(1) / d) + zeta0
    for c, p in ws.terms:
        val -= c * p * mpmath.power(X, 1 - p)
        der -= c * p * (1 - p) * mpmath.power(X, -p)
    return val, der


def width_Y(spec, ctx, X, R: float = DEFAULT_R):
    d = spec.degree
    A = main_coefficient(spec, ctx.prec)
    z0 = zeta0_exact(spec)
    zeta0 = mpmath.mpf(z0.numerator) / z0.denominator
    ws = _w_for(spec, ctx, X, R)
    Y = A * (d + 1) / (2 * d * d) * mpmath.power(X, mpmath.mpf(1) / d) + zeta0 / 2
    for c, p in ws.terms:
        Y += c * p * (p - 1) * mpmath.power(X, -p) / 2
    return Y


def solve_saddle(spec: PolynomialSpec, ctx: MWZetaContext, n: int, R: float = DEFAULT_R) -> SaddlePoint:
    prec = ctx.prec
    with prec.workdps():
        n_mp = mpmath.mpf(n)
        lo, hi = mpmath.mpf(1), mpmath.mpf(max(n, 2)) ** 2
        flo = saddle_rhs(spec, ctx, lo, R)[0] - n_mp
        fhi = saddle_rhs(spec, ctx, hi, R)[0] - n_mp
        if flo > 0 or fhi < 0:
            raise NoBracket(f"no sign change of RHS(X) - n on [1, n^2] for n={n}")
        # bisection in log X to a few digits, then safeguarded Newton
        for _ in range(40):
            mid = mpmath.sqrt(lo * hi)
            if saddle_rhs(spec, ctx, mid, R)[0] < n_mp:
                lo = mid
            else:
                hi = mid
        X = mpmath.sqrt(lo * hi)
        step_tol = mpmath.mpf(10) ** (-(prec.digits + 5))
        for it in range(MAX_ITER):
            val, der = saddle_rhs(spec, ctx, X, R)
            fx = val - n_mp
            if fx < 0:
                lo = X
            else:
                hi = X
            step = fx / der
            nx = X - step
            if not (lo <= nx <= hi):
                nx = (lo + hi) / 2
            if abs(nx - X) <= step_tol * X:
                X = nx
                break
            X = nx
        else:
            raise NonConvergence(f"saddle solver did not converge in {MAX_ITER} iterations")
        val, _ = saddle_rhs(spec, ctx, X, R)
        residual = abs(val - n_mp)
        ws = _w_for(spec, ctx, X, R)
        x0 = mpmath.mpc(1 / X)
        w1 = ws.theta_derivative(x0, 1)
        w2 = ws.theta_derivative(x0, 2)
        A = main_coefficient(spec, prec)
        C = A * mpmath.power(X, mpmath.mpf(1) / spec.degree) + mpmath.re(ws.value(x0))
        return SaddlePoint(n, +X, +width_Y(spec, ctx, X, R), +C, w1, w2, residual)


def u_coeff(d: int, j: int) -> Fraction:
    if j < 3:
        raise ValueError("j must be >= 3")
    inv = Fraction(1, d)
    return gen_binom(j - 1 + inv, j) / gen_binom(1 + inv, 2)


def v_coeff(zeta0: Fraction, d: int, j: int) -> Fraction:
    """zeta0 (1/j - u_j/2); the O(X^(-1/d)) remainder is not part of the coefficient."""
    return Fraction(zeta0) * (Fraction(1, j) - u_coeff(d, j) / 2)


@lru_cache(maxsize=32)
def p_polynomials(d: int, zeta0: Fraction, J: int, eta_order: int | None = None) -> tuple:
    """p_h(eta) for h = 0..(2J+2)(4J+3), each a tuple of Fraction coefficients.

    ``sum_{j<=4J+3} H_J^j / j! = sum_h p_h(eta) tau^h`` with
    ``H_J = sum_{j=3}^{2J+2} (u_j eta^(j-2) + v_j eta^j) tau^j``.
    """
    tau_order = (2 * J + 2) * (4 * J + 3)
    if eta_order is None:
        eta_order = tau_order
    zero_eta = TruncatedSeries("eta", [Fraction(0)], eta_order)
    coeffs = [zero_eta] * (tau_order + 1)
    for j in range(3, 2 * J + 3):
        inner = [Fraction(0)] * (eta_order + 1)
        if j - 2 <= eta_order:
            inner[j - 2] += u_coeff(d, j)
        if j <= eta_order:
            inner[j] += v_coeff(zeta0, d, j)
        coeffs[j] = TruncatedSeries("eta", inner, eta_order)
    H = TruncatedSeries("tau", coeffs, tau_order)
    E = truncated_exp(H, 4 * J + 3)
    return tuple(tuple(c.coeffs) for c in E.coeffs)


def w_rational(d: int, zeta0: Fraction, J: int) -> tuple:
    """w_q / sqrt(pi) for q = 1..J-1 as exact rationals.

    Integrating Re(tau^(2m)) = (-1)^m phi^m against e^-phi phi^(-1/2) gives
    (-1)^m Gamma(m+1/2) = (-1)^m sqrt(pi) (2m)! / (4^m m!).
    """
    if J <= 1:
        return ()
    ps = p_polynomials(d, Fraction(zeta0), J, 2 * (J - 1))
    out = []
    for q in range(1, J):
        acc = Fraction(0)
        for m in range(0, len(ps) // 2 + 1):
            h = 2 * m
            if h >= len(ps):
                break
            c = ps[h][2 * q]
            if c:
                acc += (-1) ** m * c * Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
        out.append(acc)
    return tuple(out)


def expansion_coeffs(spec: PolynomialSpec, ctx: MWZetaContext | None, J: int, R: float = DEFAULT_R,
                     prec: PrecisionConfig = DEFAULT_PRECISION) -> AsymptoticExpansion:
    d = spec.degree
    if J >= d * R:
        warnings.warn(f"J={J} is outside the admissible range J < dR = {d * R}", AdmissibleRangeWarning)
    z0 = zeta0_exact(spec)
    wr = w_rational(d, z0, J)
    with prec.workdps():
        sp = mpmath.sqrt(mpmath.pi)
        w = tuple(sp * mpmath.mpf(c.numerator) / c.denominator for c in wr)
    u = tuple(u_coeff(d, j) for j in range(3, 2 * J + 3))
    v = tuple(v_coeff(z0, d, j) for j in range(3, 2 * J + 3))
    return AsymptoticExpansion(J, w, u, v, wr)


def gaussian_integral_oracle(d: int, zeta0: Fraction, J: int, Y, prec: PrecisionConfig = DEFAULT_PRECISION):
    """int_0^Z Re(exp(-phi + H_J(phi))) phi^(-1/2) dphi by quadrature."""
    with prec.workdps():
        Y = mpmath.mpf(Y)
        us = [(j, mpmath.mpf(u_coeff(d, j).numerator) / u_coeff(d, j).denominator,
               mpmath.mpf(v_coeff(zeta0, d, j).numerator) / v_coeff(zeta0, d, j).denominator)
              for j in range(3, 2 * J + 3)]

        def H(phi):
            total = mpmath.mpc(0)
            for j, u, v in us:
                total += mpmath.j**j * (u + v / Y) * mpmath.power(phi, mpmath.mpf(j) / 2) * mpmath.power(Y, 1 - mpmath.mpf(j) / 2)
            return total

        Z = min(9 * Y / 16, mpmath.mpf(400))
        # substitute phi = t^2 to remove the endpoint singularity
        g = lambda t: 2 * mpmath.re(mpmath.exp(-t * t + H(t * t)))
        pts = [mpmath.mpf(0)] + [mpmath.mpf(k) for k in (1, 2, 4, 8, 12, 16)] + [mpmath.sqrt(Z)]
        pts = sorted(set(p for p in pts if p <= mpmath.sqrt(Z)))
        return mpmath.quad(g, pts)


def asymptotic_count(spec: PolynomialSpec, ctx: MWZetaContext, n: int, J: int | None = None,
                     R: float = DEFAULT_R, saddle: SaddlePoint | None = None):
    prec = ctx.prec
    if J is None:
        J = default_J(spec.degree, R)
    sp = saddle if saddle is not None else solve_saddle(spec, ctx, n, R)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibleRangeWarning)
        exp = expansion_coeffs(spec, ctx, J, R, prec)
    with prec.workdps():
        z0 = zeta0_exact(spec)
        zeta0 = mpmath.mpf(z0.numerator) / z0.denominator
        X, Y = sp.X, sp.Y
        pre = 1 / (2 * mpmath.pi * mpmath.power(spec.ad, zeta0))
        main = mpmath.exp(sp.C_main + n / X) / (mpmath.power(X, 1 - zeta0) * mpmath.sqrt(Y))
        corr = mpmath.sqrt(mpmath.pi)
        for q, wq in enumerate(exp.w, start=1):
            corr += wq * mpmath.power(Y, -q)
        return pre * main * corr


def K_expansion_check(spec: PolynomialSpec, ctx: MWZetaContext, n: int, R: float = DEFAULT_R,
                      saddle: SaddlePoint | None = None) -> KCheck:
    """Second difference of K(Theta) = Phi(rho e(Theta)) - 2 pi i n Theta at 0."""
    prec = ctx.prec
    sp = saddle if saddle is not None else solve_saddle(spec, ctx, n, R)
    inner = prec.with_digits(2 * prec.digits)
    with inner.workdps():
        X = sp.X
        h = mpmath.mpf(10) ** (-(inner.digits // 4)) / (2 * mpmath.pi * X)
        fp = phi_direct(spec, X, h, prec=inner)
        f0 = phi_direct(spec, X, 0, prec=inner)
        fm = phi_direct(spec, X, -h, prec=inner)
        k2 = (fp - 2 * f0 + fm) / h**2
        k1 = (fp - fm) / (2 * h) - 2j * mpmath.pi * n
        model = -2 * sp.Y * (2 * mpmath.pi * X) ** 2
        rel = abs(k2 - model) / abs(model)
        return KCheck(+rel, abs(k1) / n, k2, model)
