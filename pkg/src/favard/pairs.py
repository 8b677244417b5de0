"""(k, ℓ)-pairs of generation-n intervals and squares.

Work in units of 4^{-n}: centre distances are integers d = |num_1 - num_2|
and the bands become I_k = [4^{n-k}/2 + 1, 4^{n-k} - 1] for k < n, I_n = {0}.
All pairs are ordered.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cantor import DyadicInterval, DyadicSquare, _check_n, cantor_numerators
from .errors import ArgumentError, BoundsError, InvariantViolation

EXHAUSTIVE_MAX_1D = 8
EXHAUSTIVE_MAX_2D = 5


@dataclass(frozen=True, order=True)
class PairClass:
    k: int
    ell: int


def band(n: int, k: int) -> tuple[int, int]:
    """I_k scaled by 4^n, as inclusive integer bounds."""
    if k == n:
        return 0, 0
    w = 4 ** (n - k)
    return w // 2 + 1, w - 1


def classify_distance(n: int, d) -> np.ndarray:
    """Vectorized band index of integer distances; raises if a distance lies in no band."""
    d = np.abs(np.asarray(d, dtype=np.int64))
    out = np.full(d.shape, -1, dtype=np.int64)
    hits = np.zeros(d.shape, dtype=np.int64)
    for k in range(n + 1):
        lo, hi = band(n, k)
        inside = (d >= lo) & (d <= hi)
        out = np.where(inside, k, out)
        hits += inside
    if np.any(hits != 1):
        bad = d[hits != 1].ravel()[:5]
        raise InvariantViolation(f"distances {bad.tolist()} (units 4^-{n}) are not in exactly one band")
    return out


def classify_1d(i1: DyadicInterval, i2: DyadicInterval) -> int:
    if i1.n != i2.n:
        raise ArgumentError("intervals from different generations")
    return int(classify_distance(i1.n, i1.num - i2.num))


def classify_2d(q1: DyadicSquare, q2: DyadicSquare) -> PairClass:
    if q1.n != q2.n:
        raise ArgumentError("squares from different generations")
    k = classify_distance(q1.n, q1.ix - q2.ix)
    ell = classify_distance(q1.n, q1.iy - q2.iy)
    return PairClass(int(k), int(ell))


def _formula_1d(n: int, k: int) -> int:
    return 2**n if k == n else 2 ** (2 * n - 1 - k)


def count_pairs_1d(n: int, mode: str = "formula") -> dict[int, int]:
    """Ordered k-pairs of C_n, by closed form or by classifying all 4^n pairs."""
    n = _check_n(n)
    if mode == "formula":
        return {k: _formula_1d(n, k) for k in range(n + 1)}
    if mode != "exhaustive":
        raise ArgumentError(f"mode must be 'formula' or 'exhaustive', got {mode!r}")
    if n > EXHAUSTIVE_MAX_1D:
        raise BoundsError(f"exhaustive 1-D counting limited to n <= {EXHAUSTIVE_MAX_1D}")
    nums = cantor_numerators(n)
    ks = classify_distance(n, nums[:, None] - nums[None, :])
    counts = np.bincount(ks.ravel(), minlength=n + 1)
    return {k: int(counts[k]) for k in range(n + 1)}


def _formula_2d(n: int, k: int, ell: int) -> int:
    if k == n and ell == n:
        return 4**n
    if k == n:
        return 2 ** (3 * n - 1 - ell)
    if ell == n:
        return 2 ** (3 * n - 1 - k)
    return 2 ** (4 * n - 2 - k - ell)


def count_pairs_2d(n: int, mode: str = "formula") -> dict[tuple[int, int], int]:
    """Ordered (k, ℓ)-pairs of K_n.

    The exhaustive mode classifies every one of the 16^n ordered square pairs
    (one row of first squares at a time) without using the product structure.
    """
    n = _check_n(n)
    keys = [(k, ell) for k in range(n + 1) for ell in range(n + 1)]
    if mode == "formula":
        return {key: _formula_2d(n, *key) for key in keys}
    if mode != "exhaustive":
        raise ArgumentError(f"mode must be 'formula' or 'exhaustive', got {mode!r}")
    if n > EXHAUSTIVE_MAX_2D:
        raise BoundsError(f"exhaustive 2-D counting limited to n <= {EXHAUSTIVE_MAX_2D}")
    nums = cantor_numerators(n)
    ix = np.repeat(nums, len(nums))
    iy = np.tile(nums, len(nums))
    counts = np.zeros((n + 1) * (n + 1), dtype=np.int64)
    step = max(1, (1 << 20) // len(ix))
    for s in range(0, len(ix), step):
        k = classify_distance(n, ix[s : s + step, None] - ix[None, :])
        ell = classify_distance(n, iy[s : s + step, None] - iy[None, :])
        counts += np.bincount((k * (n + 1) + ell).ravel(), minlength=len(counts))
    return {key: int(counts[key[0] * (n + 1) + key[1]]) for key in keys}


def l2_bound_assembly(n: int, overlap_constant: float = 1.0, exact: bool = False):
    """Σ_{k ≤ ℓ} count(k, ℓ) · C · 4^{k-2n} with closed-form counts.

    Pairs with k > ℓ contribute nothing (their overlaps vanish).  With
    ``exact=True`` and a rational constant the sum is returned as a Fraction.
    """
    if not overlap_constant > 0:
        raise ArgumentError("overlap_constant must be positive")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise BoundsError(f"n must be a non-negative integer, got {n!r}")
    c = Fraction(overlap_constant)
    total = Fraction(0)
    for k in range(n + 1):
        for ell in range(k, n + 1):
            total += _formula_2d(n, k, ell) * c * Fraction(4) ** (k - 2 * n)
    return total if exact else float(total)


def pair_table(n: int, exhaustive: bool = False):
    """Rows (n, k, ell, count_formula, count_exhaustive or None)."""
    formula = count_pairs_2d(n)
    brute = count_pairs_2d(n, "exhaustive") if exhaustive else {}
    return [(n, k, ell, cnt, brute.get((k, ell))) for (k, ell), cnt in formula.items()]
