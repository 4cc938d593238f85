"""Exact and asymptotic counts of partitions into values of an integer polynomial."""

from .errors import PolyPartError
from .exact import CountTable, count_partitions, count_partitions_naive, parts_up_to
from .mwzeta import (
    MWZetaContext,
    build_context,
    mw_zeta,
    mw_zeta_deriv_zero,
    mw_zeta_direct,
    mw_zeta_residue,
    mw_zeta_zero,
)
from .phi import W_derivatives_at_zero, eval_W, phi_asymptotic, phi_direct
from .poly import (
    HypothesisReport,
    PolynomialSpec,
    RootData,
    compute_roots,
    inverse_psi,
    parse_polynomial,
    validate_hypotheses,
)
from .saddle import (
    AsymptoticExpansion,
    SaddlePoint,
    K_expansion_check,
    asymptotic_count,
    expansion_coeffs,
    solve_saddle,
    u_coeff,
    v_coeff,
)
from .specfun import PrecisionConfig, TruncatedSeries

__version__ = "0.1.0"
