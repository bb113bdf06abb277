"""Named verification suites: the acceptance grids behind the CLI.

Each suite returns the list of RelationReports for one fixed parameter grid.
Report ordering follows the (deterministic) input enumeration regardless of
how the work is scheduled.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .indexes import Index, admissible_indices, as_index
from .quadrature import lemma31_check, ulanskii_check
from .relations import (
    RelationReport,
    evaluate,
    make_report,
    verify_linear_relation,
    verify_ohno,
    verify_ohno_integer,
    verify_sum_formula,
    verify_zero,
)

INTERPOLATED_INDICES = ((1, 2), (2, 3), (1, 1, 2), (2, 2))
INTERPOLATED_S = (0.0, 0.5, 1.0, -0.25)
SUM_FORMULA_A = (1, 2, 3)
SUM_FORMULA_T = (0.0, 0.5, 1.0)
SUM_FORMULA_S = (0.0, 0.5, 1.0, -0.25)
LINEAR_INSTANCES = (((2, 3), 2, -0.5), ((2, 3), 1, -0.5))
ZERO_INSTANCES = (((2, 3), -1), ((2, 3), -2), ((1, 2, 2), -1))
STRIP_INDICES = ((2, 3), (1, 2, 2), (3, 3))
STRIP_S = (-0.5, -0.25, -1.5)


def suite_ohno_integer(seed: int = 0) -> list[RelationReport]:
    """Integer-point duality over all admissible wt <= 5, dep <= 3, m <= 2."""
    out = []
    for idx in admissible_indices(5, 3):
        for m in (0, 1, 2):
            out.append(verify_ohno_integer(idx, m, tol=1e-7))
    return out


def suite_ohno_interpolated(seed: int = 0) -> list[RelationReport]:
    out = []
    for k in INTERPOLATED_INDICES:
        for s in INTERPOLATED_S:
            out.append(verify_ohno(k, s, method="auto", tol=1e-4))
    return out


def suite_sum_formula(seed: int = 0) -> list[RelationReport]:
    out = []
    for a in SUM_FORMULA_A:
        for T in SUM_FORMULA_T:
            for s in SUM_FORMULA_S:
                out.append(verify_sum_formula(a, T, s, tol=1e-4))
    return out


def suite_linear(seed: int = 0) -> list[RelationReport]:
    return [verify_linear_relation(k, l, s, tol=1e-4)
            for (k, l, s) in LINEAR_INSTANCES]


def suite_zeros(seed: int = 0) -> list[RelationReport]:
    return [verify_zero(k, n, tol=1e-4) for (k, n) in ZERO_INSTANCES]


def suite_lemma31(seed: int = 0) -> list[RelationReport]:
    """50 random draws of the exponential-kernel identity, diff <= 1e-5."""
    rng = np.random.default_rng(seed if seed else 2024)
    out = []
    for _ in range(50):
        r = int(rng.integers(1, 4))
        while True:
            c = np.round(rng.uniform(0.5, 6.0, size=r), 6)
            if r == 1 or min(abs(c[i] - c[j]) for i in range(r)
                             for j in range(i)) > 0.15:
                break
        s = float(np.round(rng.uniform(-0.45, 2.0), 6))
        rep = lemma31_check(tuple(c), s)
        out.append(RelationReport(
            relation_id="lemma31",
            inputs={"c": [float(v) for v in c], "s": {"re": s, "im": 0.0}},
            lhs=rep.lhs, rhs=rep.rhs, lhs_err=0.0, rhs_err=0.0,
            abs_diff=rep.diff, tolerance=1e-5, passed=rep.diff <= 1e-5))
    return out


def _random_simplex_point(rng, twod: int) -> np.ndarray:
    while True:
        t = np.sort(rng.uniform(0.04, 0.96, size=twod))
        if np.min(np.diff(t)) > 0.02:
            return t


def suite_ulanskii(seed: int = 0) -> list[RelationReport]:
    """Change-of-variables properties on 50 random points each for d = 1, 2.

    Each report carries a normalized violation score:
    max(|jacobian_ratio - 1|/1e-6, log_ratio_diff/1e-12, monotonicity flag);
    the point passes iff the score is <= 1.
    """
    rng = np.random.default_rng(seed if seed else 2024)
    out = []
    for d in (1, 2):
        for _ in range(50):
            t = _random_simplex_point(rng, 2 * d)
            rep = ulanskii_check(t)
            u = np.asarray(rep.u)
            monotone = bool(np.all(np.diff(u) > 0) and u[0] > 0 and u[-1] < 1)
            score = max(abs(rep.jacobian_ratio - 1.0) / 1e-6,
                        rep.log_ratio_diff / 1e-12,
                        0.0 if monotone else 2.0)
            out.append(RelationReport(
                relation_id="ulanskii",
                inputs={"t": [float(v) for v in t], "d": d,
                        "monotone": monotone,
                        "jacobian_ratio": float(rep.jacobian_ratio),
                        "log_ratio_diff": float(rep.log_ratio_diff),
                        "normalized_score": True},
                lhs=complex(rep.jacobian_ratio), rhs=1.0,
                lhs_err=0.0, rhs_err=0.0,
                abs_diff=float(score), tolerance=1.0, passed=score <= 1.0))
    return out


def suite_cross_method(seed: int = 0) -> list[RelationReport]:
    """Series vs integral on the interpolated grid, series vs Mellin on the
    strip instances; pass budget is 1e-4 plus both error estimates."""
    out = []
    for k in INTERPOLATED_INDICES:
        for s in INTERPOLATED_S:
            lhs = evaluate(k, s, "series")
            rhs = evaluate(k, s, "integral", seed=seed)
            out.append(make_report(
                "cross_method",
                {"index": as_index(k).text, "s": {"re": s, "im": 0.0},
                 "pair": "series-vs-integral"},
                lhs, rhs, tol=1e-4))
    for k in STRIP_INDICES:
        for s in STRIP_S:
            lhs = evaluate(k, s, "series")
            rhs = evaluate(k, s, "mellin")
            out.append(make_report(
                "cross_method",
                {"index": as_index(k).text, "s": {"re": s, "im": 0.0},
                 "pair": "series-vs-mellin"},
                lhs, rhs, tol=1e-4))
    return out


SUITES: dict[str, Callable[[int], list[RelationReport]]] = {
    "ohno-integer": suite_ohno_integer,
    "ohno-interpolated": suite_ohno_interpolated,
    "sum-formula": suite_sum_formula,
    "linear": suite_linear,
    "zeros": suite_zeros,
    "lemma31": suite_lemma31,
    "ulanskii": suite_ulanskii,
    "cross-method": suite_cross_method,
}


def run_suite(name: str, seed: int = 0) -> list[RelationReport]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)


def summarize(reports: list[RelationReport]) -> dict:
    passed = sum(1 for r in reports if r.passed)
    return {"total": len(reports), "passed": passed,
            "failed": len(reports) - passed}
