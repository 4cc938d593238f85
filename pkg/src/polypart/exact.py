"""Exact partition counts into polynomial values."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import GuardExceeded, MemoryCapExceeded
from .poly import PolynomialSpec

NAIVE_GUARD = 10**4
DEFAULT_MEMORY_CAP = 8 * 2**30


@dataclass(frozen=True)
class CountTable:
    spec: PolynomialSpec
    limit: int
    counts: tuple

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def to_csv_rows(self):
        yield "n,count"
        for n, c in enumerate(self.counts):
            yield f"{n},{c}"


def parts_up_to(spec: PolynomialSpec, N: int) -> list:
    """Distinct values f(m), m >= 1, lying in [1, N]."""
    out = set()
    # beyond this point f' > 0, so once f(m) > N it stays there
    d = spec.degree
    turn = 1 + max(abs(k * spec.coeffs[k]) for k in range(1, d)) / (d * spec.ad) if d > 1 else 1
    m = 1
    while True:
        v = spec(m)
        if 1 <= v <= N:
            out.add(v)
        if v > N and m > turn:
            break
        m += 1
    return sorted(out)


def estimate_memory(N: int) -> int:
    """Rough byte count for N+1 Python ints of size ~ p(N) (ordinary partitions bound)."""
    bits = math.pi * math.sqrt(2 * max(N, 1) / 3) / math.log(2)
    per_int = 28 + 4 * int(bits / 30 + 1)
    return (N + 1) * (per_int + 8)


def count_partitions(spec: PolynomialSpec, N: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> CountTable:
    if N < 0:
        raise ValueError("N must be >= 0")
    need = estimate_memory(N)
    if need > memory_cap:
        raise MemoryCapExceeded(f"N={N} needs about {need} bytes, cap is {memory_cap}")
    counts = [0] * (N + 1)
    counts[0] = 1
    for a in parts_up_to(spec, N):
        for n in range(a, N + 1):
            counts[n] += counts[n - a]
    return CountTable(spec, N, tuple(counts))


# per-polynomial memo: entries depend only on a prefix of the sorted part list
_NAIVE_MEMO: dict = {}


def count_partitions_naive(spec: PolynomialSpec, n: int) -> int:
    """Memoised recursion over (remaining, index of the largest allowed part)."""
    if n > NAIVE_GUARD:
        raise GuardExceeded(f"naive counter is limited to n <= {NAIVE_GUARD}")
    if n < 0:
        return 0
    parts = parts_up_to(spec, n)
    memo = _NAIVE_MEMO.setdefault(spec.coeffs, {})

    def rec(rem: int, idx: int) -> int:
        if rem == 0:
            return 1
        if idx < 0:
            return 0
        key = (rem, idx)
        if key in memo:
            return memo[key]
        total = 0
        p = parts[idx]
        k = 0
        while k * p <= rem:
            total += rec(rem - k * p, idx - 1)
            k += 1
        memo[key] = total
        return total

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(parts) + 1000))
    try:
        return rec(n, len(parts) - 1)
    finally:
        sys.setrecursionlimit(old)


def product_expansion(spec: PolynomialSpec, N: int) -> list:
    """Coefficients of prod_{a <= N} (1 + z^a + z^2a + ...) truncated at z^N."""
    poly = [1] + [0] * N
    for a in parts_up_to(spec, N):
        new = [0] * (N + 1)
        for i, c in enumerate(poly):
            if c == 0:
                continue
            for j in range(0, N + 1 - i, a):
                new[i + j] += c
        poly = new
    return poly
