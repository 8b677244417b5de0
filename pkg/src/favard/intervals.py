"""Finite unions of closed intervals and their Lebesgue measure.

``IntervalSet`` is the user-facing value type.  The ``union_*`` functions are
batched kernels: each row of a 2-D array holds the raw intervals of one
projection, empty slots are NaN.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import ArgumentError, PreconditionError


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


class IntervalSet:
    """Sorted, pairwise disjoint closed intervals (touching intervals merge)."""

    __slots__ = ("_lo", "_hi")

    def __init__(self, lo=(), hi=()):
        # Trusted constructor: callers pass canonical data.
        self._lo = tuple(lo)
        self._hi = tuple(hi)

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls()

    @classmethod
    def from_raw(cls, raw) -> "IntervalSet":
        return from_raw(raw)

    @property
    def intervals(self) -> list[tuple]:
        return list(zip(self._lo, self._hi))

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self._lo, dtype=float)

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self._hi, dtype=float)

    def measure(self):
        return measure(self)

    def __len__(self):
        return len(self._lo)

    def __iter__(self):
        return iter(zip(self._lo, self._hi))

    def __bool__(self):
        return bool(self._lo)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    def __contains__(self, x) -> bool:
        i = np.searchsorted(np.asarray(self._lo, dtype=float), float(x), side="right") - 1
        return i >= 0 and x <= self._hi[i]

    def __repr__(self):
        body = ", ".join(f"[{a}, {b}]" for a, b in self)
        return f"IntervalSet({{{body}}})"

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return from_raw(self.intervals + other.intervals)

    def issubset(self, other: "IntervalSet") -> bool:
        for a, b in self:
            j = np.searchsorted(np.asarray(other._lo, dtype=float), float(a), side="right") - 1
            if j < 0 or b > other._hi[j]:
                return False
        return True


def from_raw(raw) -> IntervalSet:
    """Canonicalize arbitrary (lo, hi) pairs."""
    pairs = [tuple(p) for p in raw]
    if not pairs:
        return IntervalSet()
    for lo, hi in pairs:
        if not isinstance(lo, Real) or not isinstance(hi, Real):
            raise ArgumentError(f"non-real endpoint in ({lo!r}, {hi!r})")
        if (isinstance(lo, float) and math.isnan(lo)) or (isinstance(hi, float) and math.isnan(hi)):
            raise ArgumentError("NaN endpoint")
        if lo > hi:
            raise ArgumentError(f"lo > hi in ({lo}, {hi})")
    if all(_is_exact(a) and _is_exact(b) for a, b in pairs):
        out_lo, out_hi = [], []
        for lo, hi in sorted(pairs):
            if out_hi and lo <= out_hi[-1]:
                if hi > out_hi[-1]:
                    out_hi[-1] = hi
            else:
                out_lo.append(lo)
                out_hi.append(hi)
        return IntervalSet(out_lo, out_hi)
    arr = np.asarray(pairs, dtype=np.float64)
    return _merge_float(arr[:, 0], arr[:, 1])


def _merge_float(lo: np.ndarray, hi: np.ndarray) -> IntervalSet:
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    starts = np.flatnonzero(np.r_[True, lo[1:] > reach[:-1]])
    ends = np.r_[starts[1:] - 1, len(lo) - 1]
    return IntervalSet(lo[starts].tolist(), reach[ends].tolist())


def from_arrays(lo, hi) -> IntervalSet:
    """Canonicalize float arrays, silently dropping NaN (empty) slots."""
    lo = np.asarray(lo, dtype=np.float64).ravel()
    hi = np.asarray(hi, dtype=np.float64).ravel()
    keep = ~(np.isnan(lo) | np.isnan(hi))
    if not keep.any():
        return IntervalSet()
    lo, hi = lo[keep], hi[keep]
    if np.any(lo > hi):
        raise ArgumentError("lo > hi")
    return _merge_float(lo, hi)


def measure(s: IntervalSet):
    if not s:
        return 0.0
    if all(_is_exact(a) and _is_exact(b) for a, b in s):
        return sum((b - a for a, b in s), Fraction(0))
    return math.fsum(b - a for a, b in s)


def union(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    return s.union(t)


def delta_packing(s: IntervalSet, delta: float, rtol: float = 1e-9) -> list[tuple[float, float]]:
    """Maximal disjoint packing of delta-intervals inside ``s``.

    Each component of length L receives floor(L/delta) intervals spread with
    equal gaps, so the doubled intervals cover the component.
    """
    if delta <= 0:
        raise ArgumentError("delta must be positive")
    out = []
    for a, b in s:
        a, b = float(a), float(b)
        length = b - a
        if length < delta * (1 - rtol):
            raise PreconditionError(f"component [{a}, {b}] shorter than delta={delta}")
        k = max(1, int(math.floor(length / delta + rtol)))
        gap = max(length - k * delta, 0.0) / (k + 1)
        los = [a + gap * (i + 1) + delta * i for i in range(k)]
        # Cap each end at the next start so rounding never makes neighbours overlap.
        his = [min(lo + delta, nxt) for lo, nxt in zip(los, los[1:] + [b])]
        out.extend(zip(los, his))
    return out


def vitali_delta_cover(s: IntervalSet, delta: float) -> int:
    """Number N of packed delta-intervals; N*delta <= |s| <= 2*N*delta + delta."""
    return len(delta_packing(s, delta))


# ---------------------------------------------------------------- kernels


def _sort_rows(lo, hi):
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    order = np.argsort(lo, axis=-1, kind="stable")
    return np.take_along_axis(lo, order, -1), np.take_along_axis(hi, order, -1)


def _previous_reach(hi):
    reach = np.fmax.accumulate(hi, axis=-1)
    prev = np.empty_like(reach)
    prev[..., 0] = -np.inf
    prev[..., 1:] = reach[..., :-1]
    return prev


def union_measure(lo, hi) -> np.ndarray:
    """Measure of the union of each row of intervals (NaN slots are empty)."""
    lo, hi = _sort_rows(lo, hi)
    prev = _previous_reach(hi)
    gain = hi - np.fmax(lo, prev)
    gain = np.where(np.isnan(lo) | ~(gain > 0), 0.0, gain)
    return gain.sum(axis=-1)


def union_components(lo, hi) -> np.ndarray:
    """Number of connected components of each row's union."""
    lo, hi = _sort_rows(lo, hi)
    prev = _previous_reach(hi)
    new = ~np.isnan(lo) & (lo > prev)
    return new.sum(axis=-1)


def union_lattice_count(lo, hi, origin: float, pitch: float) -> np.ndarray:
    """Lattice points origin + (j + 1/2) * pitch inside each row's union."""
    lo, hi = _sort_rows(lo, hi)
    prev = _previous_reach(hi)
    valid = ~np.isnan(lo)
    with np.errstate(invalid="ignore"):
        top = np.floor((hi - origin) / pitch - 0.5)
        first = np.ceil((lo - origin) / pitch - 0.5)
        seen = np.floor((prev - origin) / pitch - 0.5)
    gain = top - np.fmax(first - 1, seen)
    gain = np.where(valid & (gain > 0), gain, 0.0)
    return gain.sum(axis=-1).astype(np.int64)
