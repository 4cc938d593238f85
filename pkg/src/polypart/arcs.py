"""Complete exponential sums, the oscillatory integral v_f and the arc layout.

All phases ``(a f(y) + b y) / q`` are reduced mod q in integer arithmetic before
any floating evaluation.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import OverlapDetected, QuadratureBudgetExceeded
from .phi import phi_direct
from .poly import PolynomialSpec, inverse_psi
from .specfun import DEFAULT_PRECISION, PrecisionConfig

DEFAULT_PANEL_BUDGET = 50_000


@dataclass(frozen=True)
class Arc:
    q: int
    a: int
    center: object
    half_width: object

    @property
    def lo(self):
        return self.center - self.half_width

    @property
    def hi(self):
        return self.center + self.half_width


@dataclass(frozen=True)
class ArcReport:
    X: object
    d: int
    arcs: tuple
    overlaps: tuple
    major_measure: object
    minor_measure: object


@dataclass(frozen=True)
class CfEstimate:
    value: float
    q: int
    a: int


@dataclass(frozen=True)
class MinorArcReport:
    X: object
    samples: int
    max_abs: object
    normalized: object
    central: object
    ratio: object
    minor_measure: object
    thetas: tuple = field(repr=False, default=())


def _residues(spec: PolynomialSpec, q: int) -> list:
    return [spec(y) % q for y in range(1, q + 1)]


def exp_sum(spec: PolynomialSpec, q: int, a: int, b: int = 0, prec: PrecisionConfig = DEFAULT_PRECISION):
    """S(q, a, b) = sum_{y=1}^q e((a f(y) + b y) / q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    counts: dict = {}
    for y in range(1, q + 1):
        r = (a * spec(y) + b * y) % q
        counts[r] = counts.get(r, 0) + 1
    with prec.workdps():
        total = mpmath.mpc(0)
        for r in sorted(counts):
            total += counts[r] * mpmath.expjpi(mpmath.mpf(2 * r) / q)
        return +total


def _abs_sums_all_a(spec: PolynomialSpec, q: int, b: int = 0) -> np.ndarray:
    """|S(q, a, b)| for a = 0..q-1 through one FFT of the weighted residue histogram."""
    weights = np.zeros(q, dtype=complex)
    for y in range(1, q + 1):
        weights[spec(y) % q] += np.exp(2j * np.pi * ((b * y) % q) / q)
    # sum_r w_r e(a r / q) = q * ifft(w)[a]
    return np.abs(np.fft.ifft(weights) * q)


def estimate_Cf(spec: PolynomialSpec, q_max: int) -> CfEstimate:
    """max over 2 <= q <= q_max, gcd(a, q) = 1 of |S(q, a)| / q, with its argmax."""
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    best = CfEstimate(-1.0, 0, 0)
    for q in range(2, q_max + 1):
        mags = _abs_sums_all_a(spec, q) / q
        for a in range(1, q):
            if math.gcd(a, q) == 1 and mags[a] > best.value:
                best = CfEstimate(float(mags[a]), q, a)
    return best


def _primes(lo: int, hi: int) -> list:
    return [p for p in range(max(lo, 2), hi + 1) if all(p % k for k in range(2, int(p**0.5) + 1))]


def weyl_exponent_fit(spec: PolynomialSpec, q_max: int, samples: int = 8, seed: int = 0) -> float:
    """Least-squares slope of log max_{a,b} |S(q,a,b)| against log q over primes q.

    b runs over 0 and ``samples`` random residues per prime; q = 1 is excluded.
    """
    if q_max < 10:
        raise ValueError("q_max must be >= 10")
    rng = random.Random(seed)
    xs, ys = [], []
    for q in _primes(3, q_max):
        bs = {0} | {rng.randrange(q) for _ in range(samples)}
        best = 0.0
        for b in sorted(bs):
            mags = _abs_sums_all_a(spec, q, b)
            best = max(best, float(mags[1:].max()))
        if best <= 1e-9:
            continue
        xs.append(math.log(q))
        ys.append(math.log(best))
    slope, _ = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(slope)


def v_integral(spec: PolynomialSpec, U, beta, prec: PrecisionConfig = DEFAULT_PRECISION,
               panel_budget: int = DEFAULT_PANEL_BUDGET, return_error: bool = False):
    """int_0^{psi(U)} e(beta f(g)) dg, split at every half-turn of the phase."""
    with prec.workdps():
        U = mpmath.mpf(U)
        beta = mpmath.mpf(beta)
        if U <= spec(1):
            raise ValueError("U must exceed f(1)")
        top = inverse_psi(spec, U, prec)
        if beta == 0:
            return (top, mpmath.mpf(0)) if return_error else top
        a0 = spec.a0
        turns = int(mpmath.floor(2 * abs(beta) * (U - a0)))
        if turns > panel_budget:
            raise QuadratureBudgetExceeded(f"{turns} panels exceed the budget {panel_budget}")
        pts = [mpmath.mpf(0)]
        for k in range(1, turns + 1):
            g = inverse_psi(spec, a0 + k / (2 * abs(beta)), prec)
            if g < top:
                pts.append(g)
        pts.append(top)
        integrand = lambda g: mpmath.expjpi(2 * beta * spec(g))
        val, err = mpmath.quad(integrand, pts, method="gauss-legendre", error=True)
        if err > mpmath.mpf(10) ** (-(prec.digits // 2)):
            # one refinement pass: split every panel in half
            fine = []
            for lo, hi in zip(pts, pts[1:]):
                fine += [lo, (lo + hi) / 2]
            fine.append(pts[-1])
            val, err = mpmath.quad(integrand, fine, method="gauss-legendre", error=True)
        return (val, err) if return_error else val


def weyl_sum(spec: PolynomialSpec, U, Theta_num: int, Theta_den: int, beta, prec: PrecisionConfig = DEFAULT_PRECISION):
    """F = sum_{y <= psi(U)} e((a/q + beta) f(y)) with the a/q phase reduced exactly."""
    with prec.workdps():
        top = int(mpmath.floor(inverse_psi(spec, U, prec) + mpmath.mpf(10) ** (-(prec.digits // 2))))
        while spec(top + 1) <= U:
            top += 1
        while top > 0 and spec(top) > U:
            top -= 1
        beta = mpmath.mpf(beta)
        total = mpmath.mpc(0)
        for y in range(1, top + 1):
            fy = spec(y)
            r = (Theta_num * fy) % Theta_den
            total += mpmath.expjpi(mpmath.mpf(2 * r) / Theta_den + 2 * beta * fy)
        return total


def major_arc_residual(spec: PolynomialSpec, U, q: int, a: int, beta, prec: PrecisionConfig = DEFAULT_PRECISION):
    """|F(a/q + beta) - q^-1 S(q,a) v_f(beta)| / (q^(1-2^(1-d)) (1 + U|beta|)^(1/2))."""
    if math.gcd(a, q) != 1:
        raise ValueError("need gcd(a, q) = 1")
    with prec.workdps():
        beta = mpmath.mpf(beta)
        if abs(beta) > mpmath.mpf(1) / q:
            raise ValueError("need |beta| <= 1/q")
        F = weyl_sum(spec, U, a, q, beta, prec)
        V = exp_sum(spec, q, a, 0, prec) / q * v_integral(spec, U, beta, prec)
        d = spec.degree
        norm = mpmath.power(q, 1 - mpmath.mpf(2) ** (1 - d)) * mpmath.sqrt(1 + mpmath.mpf(U) * abs(beta))
        return abs(F - V) / norm


def _arcs(X, d: int) -> list:
    X = mpmath.mpf(X)
    root = mpmath.power(X, mpmath.mpf(1) / d)
    Q = int(mpmath.floor(root + mpmath.mpf(10) ** -20))
    base = root / X  # X^(1/d - 1)
    arcs = [Arc(1, 1, mpmath.mpf(0), base)]
    for q in range(2, Q + 1):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                arcs.append(Arc(q, a, mpmath.mpf(a) / q, base / q))
    return arcs


def arc_report(X, d: int) -> ArcReport:
    """All major arcs over [-X^(1/d-1), 1 - X^(1/d-1)] and every overlapping pair."""
    if mpmath.mpf(X) < 2**d:
        raise ValueError("need X >= 2^d")
    arcs = sorted(_arcs(X, d), key=lambda r: r.lo)
    overlaps = []
    n = len(arcs)
    for i in range(n):
        for j in range(i + 1, n):
            if arcs[j].lo >= arcs[i].hi:
                break
            overlaps.append(((arcs[i].q, arcs[i].a), (arcs[j].q, arcs[j].a)))
    # on the circle the arc at 0 also neighbours the arcs just below 1
    first = arcs[0]
    for arc in arcs[1:]:
        if arc.hi > first.lo + 1:
            overlaps.append(((first.q, first.a), (arc.q, arc.a)))
    major = mpmath.fsum(2 * r.half_width for r in arcs)
    return ArcReport(mpmath.mpf(X), d, tuple(arcs), tuple(overlaps), major, 1 - major)


def arc_decomposition(X, d: int) -> list:
    rep = arc_report(X, d)
    if rep.overlaps:
        raise OverlapDetected(f"{len(rep.overlaps)} overlapping arc pairs, first {rep.overlaps[0]}")
    return list(rep.arcs)


def _merged_intervals(arcs) -> list:
    """Union of the arcs (and their translates by +-1) as sorted float intervals."""
    raw = sorted(
        (float(r.lo) + shift, float(r.hi) + shift) for r in arcs for shift in (-1, 0, 1)
    )
    merged = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def _in_major(theta: float, merged: list, starts: list) -> bool:
    i = bisect.bisect_right(starts, theta) - 1
    return i >= 0 and theta <= merged[i][1]


def minor_arc_probe(spec: PolynomialSpec, X, samples: int = 100, seed: int = 0,
                    prec: PrecisionConfig = PrecisionConfig(digits=20)) -> MinorArcReport:
    """Largest |Phi(rho e(Theta))| over sampled minor-arc Theta, normalised."""
    if X < 10**3:
        raise ValueError("need X >= 1000")
    rep = arc_report(X, spec.degree)
    rng = random.Random(seed)
    with prec.workdps():
        Xm = mpmath.mpf(X)
        merged = _merged_intervals(rep.arcs)
        starts = [m[0] for m in merged]
        lo = -float(rep.arcs[0].half_width)
        thetas = []
        tries = 0
        while len(thetas) < samples:
            tries += 1
            if tries > 1000 * samples:
                break
            t = lo + rng.random()
            if not _in_major(t, merged, starts):
                thetas.append(mpmath.mpf(t))
        best = mpmath.mpf(0)
        for t in thetas:
            best = max(best, abs(phi_direct(spec, Xm, t, prec=prec)))
        d = spec.degree
        expo = mpmath.mpf(1) / d - mpmath.mpf(1) / (d * 2 ** (d - 1))
        central = abs(phi_direct(spec, Xm, 0, prec=prec))
        return MinorArcReport(Xm, len(thetas), best, best / mpmath.power(Xm, expo), central,
                              best / central, rep.minor_measure, tuple(thetas))
