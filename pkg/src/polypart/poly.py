"""Integer polynomials f(y) = a_0 + a_1 y + ... + a_d y^d.

Parsing, the hypothesis report used by the asymptotic formula, extraction of
the shifts alpha_j in ``f(y) - a_0 = a_d y prod_j (y + alpha_j)`` and the
inverse of f on ``[0, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import mpmath

from .errors import (
    ComplexRoot,
    DegreeTooSmall,
    GcdViolation,
    NegativeRootBelowMinusOne,
    NonPositiveLeading,
    OutOfRange,
    RootFindingFailed,
)
from .specfun import DEFAULT_PRECISION, PrecisionConfig


@dataclass(frozen=True)
class PolynomialSpec:
    coeffs: tuple
    degree: int

    def __call__(self, y):
        """Evaluate f exactly for int/Fraction input, else in mpmath."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    @property
    def a0(self) -> int:
        return self.coeffs[0]

    @property
    def ad(self) -> int:
        return self.coeffs[-1]

    def derivative(self, y):
        acc = 0
        for k in range(self.degree, 0, -1):
            acc = acc * y + k * self.coeffs[k]
        return acc

    def label(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class HypothesisReport:
    a1_zero: bool
    a0_nonneg: bool
    ratio_ad1_ad: Fraction
    ratio_lt_half_d: bool
    a0_over_ad_lt_1: bool
    roots_real_nonneg: bool
    nonconstant_mod_small_primes: bool

    @property
    def overall(self) -> bool:
        return (
            self.a1_zero
            and self.a0_nonneg
            and self.ratio_lt_half_d
            and self.a0_over_ad_lt_1
            and self.roots_real_nonneg
            and self.nonconstant_mod_small_primes
        )

    def as_dict(self) -> dict:
        return {
            "a1_zero": self.a1_zero,
            "a0_nonneg": self.a0_nonneg,
            "ratio_ad1_ad": str(self.ratio_ad1_ad),
            "ratio_lt_half_d": self.ratio_lt_half_d,
            "a0_over_ad_lt_1": self.a0_over_ad_lt_1,
            "roots_real_nonneg": self.roots_real_nonneg,
            "nonconstant_mod_small_primes": self.nonconstant_mod_small_primes,
            "overall": self.overall,
        }


@dataclass(frozen=True)
class RootData:
    alphas: tuple
    residual: object


def parse_polynomial(coeffs: Sequence[int] | str) -> PolynomialSpec:
    """Build a spec from low-to-high integer coefficients (or "0,0,1")."""
    if isinstance(coeffs, str):
        coeffs = [int(tok) for tok in coeffs.replace(" ", "").split(",") if tok != ""]
    cs = [int(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    d = len(cs) - 1
    if d < 2:
        raise DegreeTooSmall(f"degree must be >= 2, got {d}")
    if cs[-1] < 1:
        raise NonPositiveLeading(f"leading coefficient must be >= 1, got {cs[-1]}")
    g = reduce(math.gcd, cs)
    if g != 1:
        raise GcdViolation(f"gcd of coefficients is {g}, expected 1")
    return PolynomialSpec(tuple(cs), d)


def tol_root(prec: PrecisionConfig = DEFAULT_PRECISION):
    return mpmath.mpf(10) ** (-(prec.digits // 2))


# ---- exact polynomial helpers on lists of Fractions (low to high) ----

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deriv(p):
    return _trim([k * p[k] for k in range(1, len(p))] or [Fraction(0)])


def _divmod(num, den):
    num = [Fraction(c) for c in num]
    den = _trim(den)
    if len(num) < len(den):
        return [Fraction(0)], _trim(num)
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        coef = num[i + len(den) - 1] / den[-1]
        q[i] = coef
        for j, c in enumerate(den):
            num[i + j] -= coef * c
    return _trim(q), _trim(num[: len(den) - 1] or [Fraction(0)])


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while not (len(b) == 1 and b[0] == 0):
        _, r = _divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def _squarefree_parts(p):
    """Yun's algorithm: [(factor, multiplicity), ...] with squarefree factors."""
    out = []
    dp = _deriv(p)
    a = _gcd(p, dp)
    b, _ = _divmod(p, a)
    c, _ = _divmod(dp, a)
    k = 1
    while len(b) > 1:
        d = [x - y for x, y in zip(c + [0] * len(b), _deriv(b) + [0] * len(c))]
        d = _trim(d)
        a = _gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b, _ = _divmod(b, a)
        c, _ = _divmod(d, a)
        k += 1
    return out


def _horner(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _refine(p, lo, hi, tol):
    """Bisection on a sign change of p in [lo, hi], then Newton polish."""
    flo = _horner(p, lo)
    for _ in range(10_000):
        mid = (lo + hi) / 2
        fm = _horner(p, mid)
        if fm == 0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    x = (lo + hi) / 2
    dp = _deriv(p)
    for _ in range(8):
        dv = _horner(dp, x)
        if dv == 0:
            break
        step = _horner(p, x) / dv
        nx = x - step
        if not (lo - tol <= nx <= hi + tol):
            break
        x = nx
        if abs(step) < mpmath.eps * max(1, abs(x)):
            break
    return x


def _real_roots_squarefree(p, tol):
    """All real roots of a squarefree rational polynomial, ascending."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [-p[0] / p[1]]
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    crit = _real_roots_squarefree(_deriv(p), tol)
    points = [-bound] + [c for c in crit if -bound < c < bound] + [bound]
    roots = []
    for lo, hi in zip(points, points[1:]):
        flo, fhi = _horner(p, lo), _horner(p, hi)
        if flo == 0:
            if not roots or abs(roots[-1] - lo) > tol:
                roots.append(lo)
            continue
        if fhi == 0:
            continue
        if (flo > 0) != (fhi > 0):
            roots.append(_refine(p, lo, hi, tol))
    if _horner(p, points[-1]) == 0:
        roots.append(points[-1])
    return roots


def compute_roots(spec: PolynomialSpec, prec: PrecisionConfig = DEFAULT_PRECISION) -> RootData:
    """Shifts alpha_1 <= ... <= alpha_{d-1} with f - a_0 = a_d y prod (y + alpha_j)."""
    cof = [Fraction(c) for c in spec.coeffs[1:]]  # (f - a_0) / y
    with prec.workdps():
        tol = tol_root(prec)
        zero_mult = 0
        while len(cof) > 1 and cof[0] == 0:
            cof.pop(0)
            zero_mult += 1
        real_roots = [mpmath.mpf(0)] * zero_mult
        if len(cof) > 1:
            for factor, mult in _squarefree_parts(cof):
                factor = [mpmath.mpf(c.numerator) / c.denominator for c in factor]
                for r in _real_roots_squarefree(factor, tol):
                    real_roots.extend([r] * mult)
        if len(real_roots) != spec.degree - 1:
            raise ComplexRoot(
                f"found {len(real_roots)} real roots of the cofactor, expected {spec.degree - 1}"
            )
        alphas = sorted(-r for r in real_roots)
        for a in alphas:
            if a <= -1:
                raise NegativeRootBelowMinusOne(f"alpha = {mpmath.nstr(a, 15)} <= -1")
        # reconstruction residual |f(-alpha_j) - a_0|
        residual = max((abs(spec(-a) - spec.a0) for a in alphas), default=mpmath.mpf(0))
        recon = [mpmath.mpf(spec.ad)]
        for a in alphas:
            recon = [0] + recon
            for i in range(len(recon) - 1):
                recon[i] += a * recon[i + 1]
        coef_err = max(abs(recon[i] - spec.coeffs[i + 1]) for i in range(spec.degree))
        residual = max(residual, coef_err)
        if residual > tol * max(1, max(abs(c) for c in spec.coeffs)):
            raise RootFindingFailed(f"root residual {mpmath.nstr(residual, 5)} exceeds tolerance")
        return RootData(tuple(+a for a in alphas), residual)


def _primes_upto(n: int) -> list:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


def nonconstant_mod(spec: PolynomialSpec, p: int) -> bool:
    values = {spec(y) % p for y in range(p)}
    return len(values) > 1


def validate_hypotheses(spec: PolynomialSpec, prec: PrecisionConfig = DEFAULT_PRECISION) -> HypothesisReport:
    cs = spec.coeffs
    d = spec.degree
    ratio = Fraction(cs[d - 1], cs[d])
    try:
        roots = compute_roots(spec, prec)
        roots_ok = all(a >= -tol_root(prec) for a in roots.alphas)
    except (ComplexRoot, NegativeRootBelowMinusOne):
        roots_ok = False
    return HypothesisReport(
        a1_zero=cs[1] == 0,
        a0_nonneg=cs[0] >= 0,
        ratio_ad1_ad=ratio,
        ratio_lt_half_d=ratio < Fraction(d, 2),
        a0_over_ad_lt_1=Fraction(cs[0], cs[d]) < 1,
        roots_real_nonneg=roots_ok,
        nonconstant_mod_small_primes=all(nonconstant_mod(spec, p) for p in _primes_upto(d)),
    )


def inverse_psi(spec: PolynomialSpec, u, prec: PrecisionConfig = DEFAULT_PRECISION):
    """The x >= 0 with f(x) = u, for f increasing on [0, inf)."""
    with prec.workdps():
        u = mpmath.mpf(u)
        if u < spec.a0:
            raise OutOfRange(f"u={u} is below f(0)={spec.a0}")
        if u == spec.a0:
            return mpmath.mpf(0)
        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        while spec(hi) < u:
            lo, hi = hi, 2 * hi
        # bisection to a coarse bracket, then Newton
        for _ in range(60):
            mid = (lo + hi) / 2
            if spec(mid) < u:
                lo = mid
            else:
                hi = mid
        x = (lo + hi) / 2
        tol = tol_root(prec) * max(1, u)
        for _ in range(200):
            fx = spec(x) - u
            if abs(fx) <= tol * mpmath.mpf(10) ** (-(prec.digits // 2)):
                break
            # shrink the bracket with the current point so the fallback always moves
            if fx < 0:
                lo = x
            else:
                hi = x
            dx = spec.derivative(x)
            nx = x - fx / dx if dx != 0 else (lo + hi) / 2
            if not (lo < nx < hi):
                nx = (lo + hi) / 2
            if nx == x:
                break
            x = nx
        return +x
