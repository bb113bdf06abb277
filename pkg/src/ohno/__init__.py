"""Numerical toolkit for the Ohno function.

The Ohno function interpolates the weighted sums of multiple zeta values
obtained by distributing extra weight over an admissible index.  This
package evaluates it by three independent representations (Dirichlet series,
iterated integral, Mellin-type strip integral), computes the exact region of
absolute convergence, and verifies the identities it satisfies with numeric
error certificates.
"""

from .errors import (
    DivergentSeriesError,
    DomainError,
    OhnoError,
    PoleError,
    RegionError,
)
from .indexes import (
    ABDecomposition,
    Index,
    RegionInfo,
    ab_decompose,
    abscissa,
    add_composition,
    admissible_indices,
    as_index,
    composition_count,
    compositions,
    dual,
    is_admissible,
    parse_index,
)
from .kernels import (
    EvalResult,
    gamma,
    gen_binomial,
    mzv,
    mzv_shifted,
    riemann_zeta,
)
from .quadrature import (
    KernelIdentityReport,
    SwapReport,
    duality_swap,
    integral_eval,
    lemma31_check,
    t_integral_eval,
    ulanskii_check,
)
from .relations import (
    HypothesisReport,
    RelationReport,
    evaluate,
    hypothesis_check,
    verify_linear_relation,
    verify_ohno,
    verify_ohno_integer,
    verify_sum_formula,
    verify_zero,
)
from .series import (
    mellin_eval,
    mellin_strip,
    ohno_sum_integer,
    partial_sums,
    series_eval,
)
from .suites import SUITES, run_suite, summarize

__version__ = "0.1.0"

__all__ = [
    "ABDecomposition", "DivergentSeriesError", "DomainError", "EvalResult",
    "HypothesisReport", "Index", "KernelIdentityReport", "OhnoError",
    "PoleError", "RegionError", "RegionInfo", "RelationReport", "SUITES",
    "SwapReport", "ab_decompose", "abscissa", "add_composition",
    "admissible_indices", "as_index", "composition_count", "compositions",
    "dual", "duality_swap", "evaluate", "gamma", "gen_binomial",
    "hypothesis_check", "integral_eval", "is_admissible", "lemma31_check",
    "mellin_eval", "mellin_strip", "mzv", "mzv_shifted", "ohno_sum_integer",
    "parse_index", "partial_sums", "riemann_zeta", "run_suite", "series_eval",
    "summarize", "t_integral_eval", "ulanskii_check", "verify_linear_relation",
    "verify_ohno", "verify_ohno_integer", "verify_sum_formula", "verify_zero",
]
