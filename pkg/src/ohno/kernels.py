"""Scalar kernels: complex gamma, Riemann zeta, multiple zeta values.

Every evaluation returns an EvalResult carrying the value together with an
absolute-error estimate and effort counters.  Working precision is plain
double; the error estimates target a 10x safety factor rather than proven
interval bounds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergentSeriesError, DomainError, OhnoError, PoleError
from .indexes import IndexLike, as_index
from .lattice import EFFORT_MZV, Effort, LinearForm, completed_sum, _B2J

ZETA_RE_MIN = -10.0  # supported window for riemann_zeta


@dataclass(frozen=True)
class EvalResult:
    """A complex value with an absolute-error estimate and effort counters."""

    value: complex
    err_est: float
    method: str
    terms_used: int = 0
    nodes_used: int = 0

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise OhnoError(f"non-finite value from {self.method}: {v}")
        if not (math.isfinite(self.err_est) and self.err_est >= 0):
            raise OhnoError(f"bad err_est from {self.method}: {self.err_est}")


# --------------------------------------------------------------------------
# Gamma: Lanczos approximation (g = 607/128, 15 coefficients) + reflection.
# --------------------------------------------------------------------------

_LANCZOS_G = 4.7421875
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def _gamma_value(z: complex) -> complex:
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_value(1.0 - z))
    z = z - 1.0
    a = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        a += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * a


def gamma(s: complex) -> EvalResult:
    """Gamma(s); relative accuracy ~1e-13 on Re s in [-10, 30], |Im s| <= 30."""
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == round(s.real):
        raise PoleError(f"gamma has a pole at s = {int(s.real)}")
    if s.real > 171.5:
        raise DomainError(f"gamma({s}) overflows double precision (Re s > 171.5)")
    value = _gamma_value(s)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"gamma({s}) is not finite in double precision")
    return EvalResult(value, 5e-13 * abs(value), "gamma-lanczos", terms_used=15)


# --------------------------------------------------------------------------
# Riemann zeta: Euler-Maclaurin for Re s >= 0.5, functional equation below.
# The direct sum cancels catastrophically when Re s < 0, hence the split.
# --------------------------------------------------------------------------

def _zeta_em(s: complex, terms: int = 12) -> tuple[complex, float]:
    cut = max(64, int(3.2 * abs(s.imag)) + 1)
    n = np.arange(1, cut + 1, dtype=float)
    val = complex(np.sum(n ** (-s)))
    val += cut ** (1.0 - s) / (s - 1.0) - 0.5 * cut ** (-s)
    rising = s
    pw = cut ** (-s - 1.0)
    for j in range(1, terms + 1):
        val += _B2J[j - 1] / math.factorial(2 * j) * rising * pw
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        pw /= cut * cut
    remainder = abs(_B2J[terms] / math.factorial(2 * terms + 2) * rising * pw)
    return val, 4.0 * remainder + 2e-15 * abs(val)


def riemann_zeta(s: complex) -> EvalResult:
    """zeta(s) for Re s > -10, s != 1, via Euler-Maclaurin and reflection."""
    s = complex(s)
    if s == 1.0:
        raise PoleError("zeta has its pole at s = 1")
    if s.real <= ZETA_RE_MIN:
        raise DomainError(f"zeta window is Re s > {ZETA_RE_MIN}, got {s}")
    if s.real >= -0.5:
        val, err = _zeta_em(s)
        return EvalResult(val, err, "zeta-em", terms_used=max(64, int(3.2 * abs(s.imag)) + 1))
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    zr, ze = _zeta_em(1.0 - s)
    g = _gamma_value(1.0 - s)
    pref = 2.0 ** s * math.pi ** (s - 1.0) * cmath.sin(math.pi * s / 2.0)
    val = pref * g * zr
    err = abs(pref * g) * ze + 2e-13 * abs(val)
    return EvalResult(val, err, "zeta-reflect", terms_used=64)


# --------------------------------------------------------------------------
# Multiple zeta values and the one-exponent-shifted variant.
# --------------------------------------------------------------------------

MZV_MAX_DEPTH = 4


def _prefix_forms(exponents) -> list[LinearForm]:
    r = len(exponents)
    return [LinearForm(tuple(1 if t <= j else 0 for t in range(r)), exponents[j])
            for j in range(r)]


@lru_cache(maxsize=4096)
def _mzv_cached(parts: tuple[int, ...]) -> EvalResult:
    value, err, points = completed_sum(_prefix_forms(parts), len(parts), EFFORT_MZV)
    return EvalResult(value, max(err, 1e-13 * abs(value)), "mzv-em", terms_used=points)


def mzv(k: IndexLike) -> EvalResult:
    """zeta(k_1,...,k_r) by nested summation in gap coordinates, depth <= 4."""
    idx = as_index(k)
    if not idx.admissible:
        raise DivergentSeriesError(f"mzv({idx}) diverges: index not admissible")
    if idx.depth > MZV_MAX_DEPTH:
        raise DomainError(f"mzv depth {idx.depth} unsupported (max {MZV_MAX_DEPTH})")
    return _mzv_cached(idx.parts)


def matsumoto_margins(exponents) -> list[float]:
    """Re(sigma_j+...+sigma_r) - (r-j+1) for j=1..r; all must be positive."""
    r = len(exponents)
    out = []
    suffix = 0.0
    margins = [0.0] * r
    for j in range(r, 0, -1):
        suffix += complex(exponents[j - 1]).real
        margins[j - 1] = suffix - (r - j + 1)
    return margins


def mzv_shifted(k: IndexLike, l: int, s: complex, margin: float = 0.05) -> EvalResult:
    """Nested sum with exponent k_l replaced by k_l + s.

    Requires every suffix sum of real parts to clear the nested-series
    convergence threshold by `margin` (strict inequalities; the boundary is
    excluded).
    """
    idx = as_index(k)
    s = complex(s)
    if not 1 <= l <= idx.depth:
        raise DomainError(f"shift position l={l} out of range 1..{idx.depth}")
    if idx.depth > MZV_MAX_DEPTH:
        raise DomainError(f"depth {idx.depth} unsupported (max {MZV_MAX_DEPTH})")
    exps = [complex(p) for p in idx.parts]
    exps[l - 1] += s
    margins = matsumoto_margins(exps)
    worst = min(margins)
    if worst <= margin:
        j = margins.index(worst) + 1
        raise DivergentSeriesError(
            f"shifted series violates the suffix-sum convergence condition at "
            f"j={j}: margin {worst:.4g} <= {margin}")
    value, err, points = completed_sum(_prefix_forms(exps), idx.depth, EFFORT_MZV)
    return EvalResult(value, max(err, 1e-13 * abs(value)), "mzv-shifted-em",
                      terms_used=points)


def gen_binomial(s: complex, i: int) -> complex:
    """Generalized binomial C(s+i, i) = prod_{j<=i} (s+j)/j.

    Exact (integer arithmetic) for nonnegative integer s.
    """
    if i < 0:
        raise DomainError(f"gen_binomial needs i >= 0, got {i}")
    s = complex(s)
    if s.imag == 0.0 and s.real >= 0 and s.real == round(s.real):
        return complex(math.comb(int(s.real) + i, i))
    out = 1.0 + 0.0j
    for j in range(1, i + 1):
        out *= (s + j) / j
    return out
