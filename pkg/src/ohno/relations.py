"""Verification engine: each proved identity becomes a checkable report.

A RelationReport records both sides of one identity instance together with
the engines' error estimates; it passes iff

    abs_diff <= tolerance + lhs_err + rhs_err,

so a failure can be attributed either to the identity or to insufficient
effort by inspecting the error fields.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError, RegionError
from .indexes import (
    IndexLike,
    abscissa,
    add_composition,
    as_index,
    compositions,
    dual,
)
from .kernels import EvalResult, gen_binomial, mzv_shifted, riemann_zeta
from .quadrature import integral_eval, t_integral_eval
from .series import mellin_eval, mellin_strip, ohno_sum_integer, series_eval

DEFAULT_TOL_EXACT = 1e-7     # pure-MZV identities
DEFAULT_TOL_CROSS = 1e-4     # quadrature/series cross checks
AUTO_MARGIN = 0.05

RELATION_IDS = (
    "ohno_integer",
    "ohno_interpolated",
    "sum_formula_T",
    "linear_relation",
    "zero_at_negative_integer",
    "hypothesis_check",
    "lemma31",
    "ulanskii",
    "cross_method",
)


@dataclass(frozen=True)
class RelationReport:
    relation_id: str
    inputs: dict
    lhs: complex
    rhs: complex
    lhs_err: float
    rhs_err: float
    abs_diff: float
    tolerance: float
    passed: bool

    def __post_init__(self):
        if self.relation_id not in RELATION_IDS:
            raise DomainError(f"unknown relation id {self.relation_id!r}")

    @property
    def budget(self) -> float:
        return self.tolerance + self.lhs_err + self.rhs_err

    def recheck(self) -> bool:
        """Re-derive the pass flag from the stored fields."""
        return self.abs_diff <= self.budget

    def to_json_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "inputs": self.inputs,
            "lhs": {"re": float(self.lhs.real), "im": float(self.lhs.imag)},
            "rhs": {"re": float(self.rhs.real), "im": float(self.rhs.imag)},
            "lhs_err": float(self.lhs_err),
            "rhs_err": float(self.rhs_err),
            "abs_diff": float(self.abs_diff),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }

    CSV_FIELDS = ("relation_id", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                  "lhs_err", "rhs_err", "abs_diff", "tolerance", "pass")

    def to_csv_row(self) -> list:
        return [self.relation_id, json.dumps(self.inputs, sort_keys=True),
                float(self.lhs.real), float(self.lhs.imag),
                float(self.rhs.real), float(self.rhs.imag),
                float(self.lhs_err), float(self.rhs_err),
                float(self.abs_diff), float(self.tolerance), bool(self.passed)]


def make_report(relation_id: str, inputs: dict, lhs: EvalResult, rhs: EvalResult,
                tol: float) -> RelationReport:
    diff = abs(complex(lhs.value) - complex(rhs.value))
    return RelationReport(
        relation_id=relation_id, inputs=inputs,
        lhs=complex(lhs.value), rhs=complex(rhs.value),
        lhs_err=float(lhs.err_est), rhs_err=float(rhs.err_est),
        abs_diff=diff, tolerance=float(tol),
        passed=diff <= tol + lhs.err_est + rhs.err_est)


# --------------------------------------------------------------------------
# Engine dispatch.
# --------------------------------------------------------------------------

def evaluate(k: IndexLike, s: complex, method: str = "auto", **opts) -> EvalResult:
    """Evaluate the Ohno function by the named engine.

    "auto" picks the widest certified representation: the Dirichlet series
    above the abscissa (+margin), then the iterated integral on Re(s) > -1,
    then the Mellin strip.
    """
    idx = as_index(k)
    s = complex(s)
    margin = opts.pop("margin", AUTO_MARGIN)
    if method == "auto":
        region = abscissa(idx)
        if s.real > region.abscissa + margin:
            method = "series"
        elif s.real > -1.0:
            method = "integral"
        elif mellin_strip(idx)[0] + margin < s.real < 0.0:
            method = "mellin"
        else:
            raise RegionError(
                f"s={s} is outside every certified representation of {idx} "
                f"(abscissa {region.abscissa})", abscissa=region.abscissa)
    if method == "series":
        allowed = {"tol", "max_n"}
        return series_eval(idx, s, margin=margin,
                           **{k_: v for k_, v in opts.items() if k_ in allowed})
    if method == "integral":
        allowed = {"nodes", "qmc_points", "seed", "mode"}
        return integral_eval(idx, s,
                             **{k_: v for k_, v in opts.items() if k_ in allowed})
    if method == "mellin":
        allowed = {"max_n"}
        return mellin_eval(idx, s, margin=margin,
                           **{k_: v for k_, v in opts.items() if k_ in allowed})
    raise DomainError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# The verifiable identities.
# --------------------------------------------------------------------------

def verify_ohno_integer(k: IndexLike, m: int, tol: float = DEFAULT_TOL_EXACT) -> RelationReport:
    """Integer-point duality: sums of zeta(k+e) match for k and its dual."""
    idx = as_index(k)
    lhs = ohno_sum_integer(idx, m)
    rhs = ohno_sum_integer(dual(idx), m)
    return make_report("ohno_integer",
                       {"index": idx.text, "dual": dual(idx).text, "m": m},
                       lhs, rhs, tol)


def verify_ohno(k: IndexLike, s: complex, method: str = "auto",
                tol: float = DEFAULT_TOL_CROSS, **opts) -> RelationReport:
    """Interpolated duality I_k(s) = I_{dual k}(s) via the chosen engine."""
    idx = as_index(k)
    kd = dual(idx)
    s = complex(s)
    try:
        lhs = evaluate(idx, s, method, **dict(opts))
    except DomainError as exc:
        raise DomainError(f"left side {idx}: {exc}") from exc
    try:
        rhs = evaluate(kd, s, method, **dict(opts))
    except DomainError as exc:
        raise DomainError(f"right side {kd}: {exc}") from exc
    sr = {"re": s.real, "im": s.imag}
    return make_report("ohno_interpolated",
                       {"index": idx.text, "dual": kd.text, "s": sr,
                        "method": method},
                       lhs, rhs, tol)


def verify_sum_formula(a: int, T: float, s: complex,
                       tol: float = DEFAULT_TOL_CROSS) -> RelationReport:
    """Interpolated sum formula:
    I^T_a(s) = (sum_i C(s+i, i) T^i) zeta(s+a+1)."""
    if a < 1:
        raise DomainError(f"sum formula needs a >= 1, got a={a}")
    s = complex(s)
    lhs = t_integral_eval(a, T, s)
    zeta = riemann_zeta(s + a + 1.0)
    coef = sum(gen_binomial(s, i) * (T ** i) for i in range(a))
    rhs = EvalResult(coef * zeta.value, abs(coef) * zeta.err_est,
                     "sum-formula-closed", terms_used=zeta.terms_used)
    return make_report("sum_formula_T",
                       {"a": a, "T": T, "s": {"re": s.real, "im": s.imag}},
                       lhs, rhs, tol)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the linear-relation hypothesis inequalities.

    worst identifies the binding (m, j, e) with its slack value; margin is
    max over m of (value + m), negative iff every inequality holds strictly.
    """

    passed: bool
    margin: float
    worst: tuple[int, int, tuple[int, ...], int]

    def to_report(self) -> RelationReport:
        viol = max(0.0, self.margin)
        return RelationReport(
            relation_id="hypothesis_check",
            inputs={"worst_m": self.worst[0], "worst_j": self.worst[1],
                    "worst_e": list(self.worst[2]), "worst_value": self.worst[3]},
            lhs=complex(self.margin), rhs=0.0, lhs_err=0.0, rhs_err=0.0,
            abs_diff=viol, tolerance=0.0, passed=viol <= 0.0)


def hypothesis_check(k: IndexLike, l: int) -> HypothesisReport:
    """Check max over j, |e|=m, e_i<=1, e_l=0 of
    r-2j+2-(k_j+e_j+...+k_r+e_r) < -m for every m = 0..r-1."""
    idx = as_index(k)
    r = idx.depth
    if not idx.admissible:
        raise DomainError(f"index {idx} is not admissible")
    if not 1 <= l <= r:
        raise DomainError(f"position l={l} out of range 1..{r}")
    worst = None
    worst_margin = -math.inf
    ok = True
    for m in range(r):
        for e in compositions(m, r, cap=1, zeros={l}):
            shifted = add_composition(idx, e)
            suffix = 0
            for j in range(r, 0, -1):
                suffix += shifted.parts[j - 1]
                value = r - 2 * j + 2 - suffix
                margin = value + m
                if margin > worst_margin:
                    worst_margin = margin
                    worst = (m, j, e, value)
                if value >= -m:
                    ok = False
    return HypothesisReport(passed=ok, margin=float(worst_margin), worst=worst)


def verify_linear_relation(k: IndexLike, l: int, s: complex,
                           tol: float = DEFAULT_TOL_CROSS,
                           **opts) -> RelationReport:
    """Alternating sum of shifted Ohno functions vs the shifted nested zeta:

    sum_{j=0}^{r-1} (-1)^j sum_{|e|=j, e_i<=1, e_l=0} I_{k+e}(s-j)
        = zeta(k_1, ..., k_l + s, ..., k_r).
    """
    idx = as_index(k)
    s = complex(s)
    hyp = hypothesis_check(idx, l)
    if not hyp.passed:
        raise DomainError(
            f"linear-relation hypothesis fails for {idx}, l={l}: binding "
            f"(m={hyp.worst[0]}, j={hyp.worst[1]}, e={hyp.worst[2]}) gives "
            f"{hyp.worst[3]} >= -{hyp.worst[0]}")
    r = idx.depth
    total = 0.0 + 0.0j
    err = 0.0
    points = 0
    for j in range(r):
        sign = -1.0 if j % 2 else 1.0
        for e in compositions(j, r, cap=1, zeros={l}):
            res = series_eval(add_composition(idx, e), s - j,
                              **{k_: v for k_, v in opts.items() if k_ in ("tol", "max_n")})
            total += sign * res.value
            err += res.err_est
            points += res.terms_used
    lhs = EvalResult(total, err, "linear-combination", terms_used=points)
    rhs = mzv_shifted(idx, l, s)
    return make_report("linear_relation",
                       {"index": idx.text, "l": l, "s": {"re": s.real, "im": s.imag}},
                       lhs, rhs, tol)


def verify_zero(k: IndexLike, n: int, tol: float = DEFAULT_TOL_CROSS) -> RelationReport:
    """Claimed zero of the Ohno function at a negative integer inside the
    convergence region, checked by series evaluation against exact 0."""
    idx = as_index(k)
    if not (isinstance(n, int) and n < 0):
        raise DomainError(f"verify_zero needs a negative integer, got {n}")
    region = abscissa(idx)
    if not region.abscissa < n < 0:
        raise DomainError(
            f"n={n} is outside the open interval ({region.abscissa}, 0) for {idx}")
    lhs = series_eval(idx, float(n))
    rhs = EvalResult(0.0, 0.0, "exact-zero")
    return make_report("zero_at_negative_integer",
                       {"index": idx.text, "n": n}, lhs, rhs, tol)
