"""Dirichlet-series engines for the Ohno function.

The defining series

    I_k(s) = sum_{i<=r} sum_{0<n_1<...<n_r} prod_j n_j^(-k_j)
             * n_i^(-s) * prod_{j != i} n_j/(n_j - n_i)

is evaluated by splitting it into its r partial-fraction pieces, rewriting
each piece in gap coordinates m_j = n_j - n_{j-1} (where it becomes a
positive-term sum of products of powers of 0/1 linear forms over the full
lattice Z_{>=1}^r) and completing each nested sum by Euler-Maclaurin.  Direct
truncation of the tuple sum converges far too slowly near the abscissa for
the certified tolerances; the raw partial sums remain available through
`partial_sums` as a diagnostic.

`mellin_eval` computes the alternative strip representation

    -sin(pi s)/pi * sum prod_j n_j^(1-k_j) * int_0^inf w^(-s-1)/prod(w+n_j) dw

with the inner integral done by a fixed ~200-node tanh-sinh rule after
w = u/(1-u), and the outer nested sum completed on the same lattice.
"""

from __future__ import annotations

import cmath
import math
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, RegionError
from .indexes import IndexLike, abscissa, as_index, add_composition, compositions
from .kernels import EvalResult, mzv
from .lattice import (
    EFFORT_SERIES,
    Effort,
    LinearForm,
    axis_rule,
    lattice_sum,
    tanh_sinh_rule,
)

SERIES_MAX_DEPTH = 3
DEFAULT_MARGIN = 0.05


def _require_in_region(idx, s: complex, margin: float) -> float:
    region = abscissa(idx)
    if s.real <= region.abscissa + margin:
        raise RegionError(
            f"Re(s)={s.real} is not above the convergence abscissa "
            f"{region.abscissa} of {idx} by the margin {margin}",
            abscissa=region.abscissa)
    return region.abscissa


def piece_forms(k: IndexLike, i: int, s: complex) -> list[LinearForm]:
    """Linear forms of partial-fraction piece i (1-based) in gap coordinates.

    Piece i carries sign (-1)^(i-1) and consists of the prefix forms
    L_j = m_1+...+m_j with exponent k_j - 1 (k_i + s at j = i) together with
    the interior forms m_{j+1}+...+m_i (j < i) and m_{i+1}+...+m_j (j > i),
    each with exponent 1.
    """
    idx = as_index(k)
    r = idx.depth
    forms = []
    for j in range(1, r + 1):
        e = (idx.parts[j - 1] + s) if j == i else complex(idx.parts[j - 1] - 1)
        if e != 0:
            forms.append(LinearForm(tuple(1 if t < j else 0 for t in range(r)), e))
    for j in range(1, i):
        forms.append(LinearForm(tuple(1 if j <= t < i else 0 for t in range(r)), 1.0))
    for j in range(i + 1, r + 1):
        forms.append(LinearForm(tuple(1 if i <= t < j else 0 for t in range(r)), 1.0))
    return forms


def _series_once(idx, s: complex, cut: int, h: float) -> tuple[complex, float, int]:
    r = idx.depth
    pieces = []
    points = 0
    for i in range(1, r + 1):
        res = lattice_sum(piece_forms(idx, i, s), r, cut, h)
        pieces.append(res.value if (i - 1) % 2 == 0 else -res.value)
        points += res.points
    # Compensated combination; the pieces cancel heavily near the zeros.
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for p in sorted(pieces, key=abs, reverse=True):
        y = p - comp
        t = total + y
        comp = (t - total) - y
        total = t
    guard = np.finfo(float).eps * max((abs(p) for p in pieces), default=0.0)
    return total, guard, points


def series_eval(
    k: IndexLike,
    s: complex,
    tol: Optional[float] = None,
    max_n: Optional[int] = None,
    margin: float = DEFAULT_MARGIN,
) -> EvalResult:
    """Ohno function by its defining Dirichlet series, depth <= 3.

    Requires Re(s) > abscissa(k) + margin.  `max_n` scales the per-axis
    truncation of the completed nested sums; `tol` triggers one effort
    escalation and is otherwise advisory (a result whose err_est exceeds tol
    is still returned, flagged by that err_est).
    """
    idx = as_index(k)
    s = complex(s)
    if not idx.admissible:
        raise DomainError(f"series_eval needs an admissible index, got {idx}")
    if idx.depth > SERIES_MAX_DEPTH:
        raise DomainError(
            f"series_eval supports depth <= {SERIES_MAX_DEPTH}, got {idx.depth}")
    _require_in_region(idx, s, margin)

    effort = EFFORT_SERIES
    if max_n is not None:
        if max_n < 8:
            raise DomainError("max_n must be >= 8")
        effort = Effort(max(8, 2 * max_n // 3), 0.155, max_n, 0.12)

    lo_v, lo_g, lo_p = _series_once(idx, s, effort.base_cut, effort.base_h)
    hi_v, hi_g, hi_p = _series_once(idx, s, effort.cut, effort.h)
    err = abs(hi_v - lo_v) + hi_g + 1e-15 * abs(hi_v)
    points = lo_p + hi_p
    if tol is not None and err > tol and max_n is None:
        lo_v, hi_g, lo_p = hi_v, hi_g, hi_p
        hi_v, hi_g2, hi_p = _series_once(idx, s, 2 * effort.cut, 0.10)
        err = abs(hi_v - lo_v) + hi_g2 + 1e-15 * abs(hi_v)
        points += hi_p
    return EvalResult(hi_v, err, "series-em", terms_used=points)


def ohno_sum_integer(k: IndexLike, m: int) -> EvalResult:
    """sum over |e| = m of zeta(k + e); equals the Ohno function at s = m."""
    idx = as_index(k)
    if m < 0:
        raise DomainError(f"ohno_sum_integer needs m >= 0, got {m}")
    if not idx.admissible:
        raise DomainError(f"index {idx} is not admissible")
    total = 0.0
    err = 0.0
    points = 0
    for e in compositions(m, idx.depth):
        res = mzv(add_composition(idx, e))
        total += res.value
        err += res.err_est
        points += res.terms_used
    return EvalResult(total, err, "ohno-sum", terms_used=points)


# --------------------------------------------------------------------------
# Mellin-type strip representation.
# --------------------------------------------------------------------------

_MELLIN_H = 0.045          # ~200-node rule for the inner w-integral
_MELLIN_H_CHECK = 0.065    # coarser rule backing the quadrature error term


def _mellin_kernel_rule(h: float):
    rule = tanh_sinh_rule(h, 1e-75)
    logw = np.log(rule.x) - np.log(rule.xc)          # w = u/(1-u)
    logjac = np.log(rule.w) - 2.0 * np.log(rule.xc)  # w_q du -> dw weight
    return logw, logjac


def _mellin_once(idx, s: complex, cut: int, h: float, kernel_h: float):
    """Lattice-completed sum of prod L_j^(1-k_j) * J(L; s) in gap coordinates."""
    r = idx.depth
    logw, logjac = _mellin_kernel_rule(kernel_h)
    rules = [axis_rule(cut, h) for _ in range(r)]
    grids = [rules[j].x.reshape((-1,) + (1,) * (r - 1 - j)) for j in range(r)]
    x0, w0 = rules[0]
    inner = 1
    for ru in rules[1:]:
        inner *= len(ru.x)
    chunk = max(1, 400_000 // max(1, inner))
    total = 0.0 + 0.0j
    points = 0
    for lo in range(0, len(x0), chunk):
        sub0 = x0[lo:lo + chunk].reshape((-1,) + (1,) * (r - 1))
        Ls = []
        L = sub0
        Ls.append(L)
        for j in range(1, r):
            L = L + grids[j]
            Ls.append(L)
        acc = 0.0
        for j, kj in enumerate(idx.parts):
            if kj != 1:
                acc = acc + (1.0 - kj) * np.log(Ls[j])
        kern = 0.0
        for q in range(len(logw)):
            ex = (-s - 1.0) * logw[q] + logjac[q]
            for j in range(r):
                ex = ex - np.log(np.exp(logw[q]) + Ls[j])
            kern = kern + np.exp(ex)
        block = np.exp(acc) * kern
        points += block.size * len(logw)
        for j in range(r - 1, 0, -1):
            block = np.tensordot(block, rules[j].w, axes=([j], [0]))
        total += np.dot(w0[lo:lo + chunk], np.atleast_1d(block).reshape(-1))
    return complex(total), points


def mellin_strip(k: IndexLike) -> tuple[float, float]:
    """Open strip (lo, 0) on which the Mellin representation is evaluated.

    The inner integral needs Re(s) > -depth on top of the series abscissa.
    """
    idx = as_index(k)
    return max(abscissa(idx).abscissa, -float(idx.depth)), 0.0


def mellin_eval(
    k: IndexLike,
    s: complex,
    max_n: Optional[int] = None,
    margin: float = DEFAULT_MARGIN,
) -> EvalResult:
    """Ohno function by the Mellin-type representation on its strip.

    Negative integers inside the strip return exactly 0 (the sin(pi s)
    prefactor vanishes; the representation degenerates there).
    """
    idx = as_index(k)
    s = complex(s)
    if not idx.admissible:
        raise DomainError(f"mellin_eval needs an admissible index, got {idx}")
    if idx.depth > SERIES_MAX_DEPTH:
        raise DomainError(
            f"mellin_eval supports depth <= {SERIES_MAX_DEPTH}, got {idx.depth}")
    lo, hi = mellin_strip(idx)
    if not (lo + margin < s.real < hi - 1e-12):
        raise RegionError(
            f"Re(s)={s.real} outside the Mellin strip ({lo}, 0) of {idx} "
            f"(margin {margin})", abscissa=lo)
    if s.imag == 0.0 and s.real == round(s.real):
        return EvalResult(0.0, 0.0, "mellin-zero")

    cut = max_n if max_n is not None else 32
    base_v, base_p = _mellin_once(idx, s, max(8, 2 * cut // 3), 0.155, _MELLIN_H)
    ref_v, ref_p = _mellin_once(idx, s, cut, 0.12, _MELLIN_H)
    chk_v, chk_p = _mellin_once(idx, s, cut, 0.12, _MELLIN_H_CHECK)
    pref = -cmath.sin(math.pi * s) / math.pi
    value = pref * ref_v
    err = abs(pref) * (abs(ref_v - base_v) + abs(ref_v - chk_v)) + 1e-15 * abs(value)
    return EvalResult(value, err, "mellin-em", terms_used=base_p + ref_p + chk_p)


# --------------------------------------------------------------------------
# Raw truncated tuple sums (diagnostic; used by the abscissa sanity check).
# --------------------------------------------------------------------------

def partial_sums(k: IndexLike, s: complex, cuts: Sequence[int]) -> list[complex]:
    """Raw partial sums of the defining series over tuples with n_r <= N.

    No tail completion and no convergence requirement; this is the direct
    truncation, exposed to observe convergence or divergence empirically.
    Depth <= 3.
    """
    idx = as_index(k)
    s = complex(s)
    r = idx.depth
    if r > SERIES_MAX_DEPTH:
        raise DomainError(f"partial_sums supports depth <= {SERIES_MAX_DEPTH}")
    cuts = sorted(set(int(n) for n in cuts))
    if not cuts or cuts[0] < r:
        raise DomainError("cuts must all be >= depth")
    real_mode = s.imag == 0.0
    sdt = float if real_mode else complex
    out = []
    shells: list[complex] = []

    def shell_r1(n):
        return float(n) ** (-idx.parts[0] - s)

    def shell_r2(n2):
        n1 = np.arange(1, n2, dtype=float)
        w = (n1 ** (-s) * n2 - float(n2) ** (-s) * n1) / (n2 - n1)
        return np.sum(n1 ** float(-idx.parts[0]) * w) * float(n2) ** float(-idx.parts[1])

    def shell_r3(n3):
        n1 = np.arange(1, n3 - 1, dtype=float).reshape(-1, 1)
        n2 = np.arange(2, n3, dtype=float).reshape(1, -1)
        mask = n1 < n2
        n3f = float(n3)
        gap12 = np.where(mask, n2 - n1, 1.0)
        w1 = n1 ** (-s) * (n2 / gap12) * (n3f / (n3f - n1))
        w2 = n2 ** (-s) * (-n1 / gap12) * (n3f / (n3f - n2))
        w3 = n3f ** (-s) * np.where(mask, (n1 / (n1 - n3f)) * (n2 / (n2 - n3f)), 0.0)
        base = n1 ** float(-idx.parts[0]) * n2 ** float(-idx.parts[1]) * mask
        total = np.sum(base * (w1 + w2 + w3))
        return total * n3f ** float(-idx.parts[2])

    shell = {1: shell_r1, 2: shell_r2, 3: shell_r3}[r]
    prev = r - 1
    for cut in cuts:
        for n in range(max(prev + 1, r), cut + 1):
            shells.append(complex(shell(n)))
        prev = max(prev, cut)
        re = math.fsum(z.real for z in shells)
        im = math.fsum(z.imag for z in shells)
        out.append(complex(re, im) if not real_mode else complex(re, 0.0))
    return out
