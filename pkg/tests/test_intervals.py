from fractions import Fraction

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from favard.errors import ArgumentError, PreconditionError
from favard.intervals import (
    IntervalSet,
    delta_packing,
    from_arrays,
    from_raw,
    measure,
    union_components,
    union_lattice_count,
    union_measure,
    vitali_delta_cover,
)

raw_intervals = st.lists(
    st.tuples(st.floats(-10, 10), st.floats(0, 5)).map(lambda p: (p[0], p[0] + p[1])), max_size=30
)


def test_overlap_merge():
    s = from_raw([(0, 1), (0.5, 2)])
    assert s.intervals == [(0, 2)]
    assert measure(s) == 2


def test_touching_merge():
    assert from_raw([(0, 1), (1, 2)]).intervals == [(0, 2)]


def test_empty_measure():
    assert measure(IntervalSet()) == 0


def test_exact_fraction_measure():
    s = from_raw([(Fraction(0), Fraction(1, 4)), (Fraction(3, 4), Fraction(1))])
    assert measure(s) == Fraction(1, 2)


@pytest.mark.parametrize("bad", [[(1, 0)], [(float("nan"), 1)], [("a", 1)]])
def test_invalid_input(bad):
    with pytest.raises(ArgumentError):
        from_raw(bad)


def test_random_measure_matches_grid_oracle():
    rng = np.random.default_rng(0)
    lo = rng.uniform(0, 100, 1000)
    hi = lo + rng.exponential(0.05, 1000)
    s = from_raw(list(zip(lo.tolist(), hi.tolist())))
    pitch = 1e-4
    cells = np.arange(0, 101, pitch) + pitch / 2
    inside = np.zeros(cells.size, dtype=bool)
    for a, b in zip(lo, hi):
        inside[np.searchsorted(cells, a) : np.searchsorted(cells, b, side="right")] = True
    oracle = inside.sum() * pitch
    assert abs(measure(s) - oracle) <= 2 * len(s) * pitch


def test_contains_and_subset():
    s = from_raw([(0, 1), (2, 3)])
    assert 0.5 in s and 2 in s and 1.5 not in s
    assert from_raw([(0.2, 0.4), (2.5, 3)]).issubset(s)
    assert not from_raw([(0.5, 2.5)]).issubset(s)


def test_from_arrays_drops_nan():
    s = from_arrays([0, np.nan, 3], [1, np.nan, 4])
    assert s.intervals == [(0.0, 1.0), (3.0, 4.0)]


def test_vitali_examples():
    assert vitali_delta_cover(from_raw([(0, 1)]), 1) == 1
    assert vitali_delta_cover(from_raw([(0, 0.3), (0.5, 0.8)]), 0.1) == 6


def test_vitali_short_component():
    with pytest.raises(PreconditionError):
        vitali_delta_cover(from_raw([(0, 1), (2, 2.05)]), 0.1)


@given(raw_intervals)
def test_idempotent(raw):
    s = from_raw(raw)
    assert from_raw(s.intervals) == s
    for (a, b), (c, d) in zip(s.intervals, s.intervals[1:]):
        assert a <= b < c <= d


@given(raw_intervals, raw_intervals)
def test_subadditive_and_monotone(r1, r2):
    s, t = from_raw(r1), from_raw(r2)
    u = s.union(t)
    assert measure(u) <= measure(s) + measure(t) + 1e-9
    assert measure(s) <= measure(u) + 1e-12
    assert s.issubset(u) and t.issubset(u)


def test_additive_when_disjoint():
    s, t = from_raw([(0, 1)]), from_raw([(2, 5)])
    assert measure(s.union(t)) == measure(s) + measure(t)


@settings(max_examples=200)
@given(
    st.lists(st.tuples(st.floats(0, 20), st.floats(0.1, 3)).map(lambda p: (p[0], p[0] + p[1])), min_size=1, max_size=10),
    st.floats(0.01, 0.1),
)
@example([(0.0, 1.0)], 0.01)  # neighbours overlapped by one ulp
def test_packing_bounds(raw, delta):
    s = from_raw(raw)
    packing = delta_packing(s, delta)
    n = len(packing)
    assert n * delta <= measure(s) + 1e-9
    assert measure(s) <= 2 * n * delta + delta
    assert all(any(a - 1e-12 <= lo and hi <= b + 1e-12 for a, b in s) for lo, hi in packing)
    assert all(b1 <= a2 for (_, b1), (a2, _) in zip(packing, packing[1:]))
    assert 1 / 3 <= n * delta / measure(s) <= 1 + 1e-9


@given(raw_intervals)
def test_kernels_match_interval_set(raw):
    lo = np.array([a for a, _ in raw] + [np.nan])
    hi = np.array([b for _, b in raw] + [np.nan])
    s = from_raw(raw)
    assert union_measure(lo[None], hi[None])[0] == pytest.approx(measure(s), abs=1e-9)
    assert union_components(lo[None], hi[None])[0] == len(s)
    pitch = 0.37
    brute = sum(
        1 for j in range(-40, 60) if any(a <= (j + 0.5) * pitch <= b for a, b in s)
    )
    assert union_lattice_count(lo[None], hi[None], 0.0, pitch)[0] == brute
