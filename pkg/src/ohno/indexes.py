"""Index algebra for admissible exponent tuples.

An index is a tuple of positive integer exponents (k_1, ..., k_r), stored
with k_1 as the innermost summation variable's exponent.  All I/O uses this
ascending-summation order; the literature is split on the convention, so it
is fixed here once and documented everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import DomainError

IndexLike = "Index | Sequence[int]"


@dataclass(frozen=True)
class Index:
    """An exponent tuple (k_1, ..., k_r) with k_i >= 1.

    Admissible means the last entry is >= 2, which is exactly the condition
    for the associated nested series to converge.
    """

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise DomainError("index must have at least one part")
        if any((not isinstance(p, int)) or p < 1 for p in self.parts):
            raise DomainError(f"index parts must be integers >= 1, got {self.parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def admissible(self) -> bool:
        return self.parts[-1] >= 2

    @property
    def text(self) -> str:
        """Canonical comma-separated form, e.g. '1,2,2'."""
        return ",".join(str(p) for p in self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self):
        return f"({self.text})"


def as_index(k: IndexLike) -> Index:
    """Coerce a sequence of ints (or an Index) into an Index."""
    if isinstance(k, Index):
        return k
    return Index(tuple(int(p) for p in k))


def parse_index(text: str) -> Index:
    """Parse the canonical comma-separated syntax, e.g. '1,2,2'."""
    parts = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok or not tok.lstrip("+").isdigit():
            raise DomainError(f"bad index syntax {text!r}: parts must be positive integers")
        parts.append(int(tok))
    return Index(tuple(parts))


def is_admissible(k: IndexLike) -> bool:
    """True iff the last exponent is >= 2."""
    return as_index(k).admissible


def _require_admissible(k: IndexLike) -> Index:
    idx = as_index(k)
    if not idx.admissible:
        raise DomainError(f"index {idx} is not admissible: last part must be >= 2")
    return idx


@dataclass(frozen=True)
class ABDecomposition:
    """Run-length form of an admissible index.

    pairs = [(a_1, b_1), ..., (a_d, b_d)] encodes the index
    (1 repeated a_1-1 times, b_1+1, ..., 1 repeated a_d-1 times, b_d+1);
    d equals the number of entries >= 2.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.pairs or any(a < 1 or b < 1 for a, b in self.pairs):
            raise DomainError("decomposition pairs must all satisfy a_i, b_i >= 1")

    @property
    def d(self) -> int:
        return len(self.pairs)

    def reconstruct(self) -> Index:
        parts: list[int] = []
        for a, b in self.pairs:
            parts.extend([1] * (a - 1))
            parts.append(b + 1)
        return Index(tuple(parts))


def ab_decompose(k: IndexLike) -> ABDecomposition:
    """Run-length (a_i, b_i) decomposition of an admissible index."""
    idx = _require_admissible(k)
    pairs = []
    ones = 0
    for p in idx.parts:
        if p == 1:
            ones += 1
        else:
            pairs.append((ones + 1, p - 1))
            ones = 0
    return ABDecomposition(tuple(pairs))


def dual(k: IndexLike) -> Index:
    """Transpose of the run-length decomposition; weight-preserving involution."""
    dec = ab_decompose(k)
    parts: list[int] = []
    for a, b in reversed(dec.pairs):
        parts.extend([1] * (b - 1))
        parts.append(a + 1)
    return Index(tuple(parts))


@dataclass(frozen=True)
class RegionInfo:
    """Exact abscissa of absolute convergence of the defining series.

    slack[j-1] = r - 2j + 2 - (k_j + ... + k_r) for j = 1..r; the series
    converges absolutely exactly on Re(s) > abscissa = max(slack).
    """

    abscissa: float
    slack: tuple[int, ...]


def abscissa(k: IndexLike) -> RegionInfo:
    """Convergence abscissa sigma_0(k) with the per-j slack terms."""
    idx = _require_admissible(k)
    r = idx.depth
    suffix = 0
    slack = [0] * r
    for j in range(r, 0, -1):
        suffix += idx.parts[j - 1]
        slack[j - 1] = r - 2 * j + 2 - suffix
    return RegionInfo(abscissa=float(max(slack)), slack=tuple(slack))


def compositions(
    m: int,
    r: int,
    cap: Optional[int] = None,
    zeros: Optional[set[int]] = None,
) -> list[tuple[int, ...]]:
    """All length-r compositions of m >= 0 into nonnegative parts.

    cap bounds every entry; zeros is a set of 1-based positions forced to 0.
    Output is in lexicographic order so downstream reports are stable.
    Infeasible constraints yield an empty list.
    """
    if m < 0 or r < 1:
        raise DomainError(f"compositions requires m >= 0 and r >= 1, got m={m}, r={r}")
    zeros = zeros or set()
    if any(z < 1 or z > r for z in zeros):
        raise DomainError(f"forced-zero positions must lie in 1..{r}")
    out: list[tuple[int, ...]] = []

    def rec(pos: int, left: int, prefix: tuple[int, ...]):
        if pos == r:
            if left == 0:
                out.append(prefix)
            return
        if (pos + 1) in zeros:
            rec(pos + 1, left, prefix + (0,))
            return
        hi = left if cap is None else min(left, cap)
        for v in range(hi + 1):
            rec(pos + 1, left - v, prefix + (v,))

    rec(0, m, ())
    return out


def add_composition(k: IndexLike, e: Sequence[int]) -> Index:
    """Entrywise sum k + e; e must have the same length as k."""
    idx = as_index(k)
    if len(e) != idx.depth:
        raise DomainError("composition length must equal index depth")
    return Index(tuple(p + int(v) for p, v in zip(idx.parts, e)))


def admissible_indices(max_weight: int, max_depth: Optional[int] = None) -> Iterator[Index]:
    """All admissible indices with weight <= max_weight, in (weight, parts) order."""

    def comps_pos(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in comps_pos(total - first, parts - 1):
                yield (first,) + rest

    for wt in range(2, max_weight + 1):
        depth_hi = wt - 1 if max_depth is None else min(max_depth, wt - 1)
        for r in range(1, depth_hi + 1):
            for parts in comps_pos(wt, r):
                if parts[-1] >= 2:
                    yield Index(parts)


def composition_count(m: int, r: int) -> int:
    """Number of unconstrained compositions, C(m+r-1, r-1)."""
    return math.comb(m + r - 1, r - 1)
