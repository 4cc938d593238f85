from __future__ import annotations

import functools

import pytest

from polypart.mwzeta import build_context
from polypart.poly import compute_roots, parse_polynomial

BATTERY = {
    "y^2": "0,0,1",
    "y^3": "0,0,0,1",
    "2y^3+y^2": "0,0,1,2",
    "5y^2+3": "3,0,5",
    "y^4": "0,0,0,0,1",
}


@functools.lru_cache(maxsize=None)
def spec_of(coeffs: str):
    return parse_polynomial(coeffs)


@functools.lru_cache(maxsize=None)
def ctx_of(coeffs: str):
    spec = spec_of(coeffs)
    return build_context(compute_roots(spec).alphas, spec.degree)


@pytest.fixture(scope="session")
def battery():
    return {name: spec_of(c) for name, c in BATTERY.items()}


@pytest.fixture(scope="session")
def squares():
    return spec_of("0,0,1"), ctx_of("0,0,1")


@pytest.fixture(scope="session")
def cubic():
    return spec_of("0,0,1,2"), ctx_of("0,0,1,2")


@pytest.fixture(scope="session")
def shifted():
    return spec_of("3,0,5"), ctx_of("3,0,5")
