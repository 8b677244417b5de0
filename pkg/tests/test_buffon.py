import math

import numpy as np
import pytest

from favard.buffon import (
    RngSpec,
    counting_function,
    counting_function_scan,
    drop_samples,
    hit_histogram,
    mc_favard_curve,
    moment_estimate,
    pair_overlap,
    square_hits_curve,
)
from favard.cantor import DyadicSquare, cantor_2d
from favard.curve import parse_curve
from favard.curveproj import favard_curve_quadrature
from favard.errors import ArgumentError

from oracles import dense_hit

HALF = parse_curve("halfcircle:R=2,sign=-")
CIRCLE = parse_curve("circle:R=2")
POINT = parse_curve("point")


def test_point_inside_square():
    sq = DyadicSquare(1, 3, 0)
    assert square_hits_curve(sq, POINT, (0.8, 0.1))
    assert square_hits_curve(sq, POINT, (0.75, 0.25))  # closed corner
    assert not square_hits_curve(sq, POINT, (0.5, 0.1))


def test_arc_apex_below_square():
    sq = DyadicSquare(1, 0, 3)
    xc, y0 = 0.125, 0.75
    # Apex of the lower arc one unit below the square's bottom edge.
    assert not square_hits_curve(sq, HALF, (xc, y0 - 1 + 2))


def _refined_distance(curve, x0, y0, side, z):
    best = math.inf
    for piece in curve.pieces:
        t = np.linspace(piece.a, piece.b, 400_001)
        x, y = piece.points(t)
        x, y = np.atleast_1d(x) + z[0], np.atleast_1d(y) + z[1]
        dx = np.maximum(0, np.maximum(x0 - x, x - x0 - side))
        dy = np.maximum(0, np.maximum(y0 - y, y - y0 - side))
        best = min(best, float(np.hypot(dx, dy).min()))
    return best


@pytest.mark.parametrize("curve", [HALF, CIRCLE], ids=["halfcircle", "circle"])
def test_hit_test_against_dense_sampling(curve):
    rng = np.random.default_rng(4)
    squares = cantor_2d(2).squares
    cx0, cx1, cy0, cy1 = curve.bbox()
    pts = [p.points(np.linspace(p.a, p.b, 10_000)) for p in curve.pieces]
    xs = np.concatenate([np.atleast_1d(x) for x, _ in pts])
    ys = np.concatenate([np.atleast_1d(y) for _, y in pts])
    disagreements = 0
    for _ in range(10_000):
        q = squares[rng.integers(len(squares))]
        x0, y0, s = float(q.x0), float(q.y0), float(q.side)
        z = (rng.uniform(x0 - cx1 - 0.05, x0 + s - cx0 + 0.05), rng.uniform(y0 - cy1 - 0.05, y0 + s - cy0 + 0.05))
        sampled = bool(np.any((xs + z[0] >= x0) & (xs + z[0] <= x0 + s) & (ys + z[1] >= y0) & (ys + z[1] <= y0 + s)))
        exact = square_hits_curve(q, curve, z)
        assert exact or not sampled, "false negative"
        if exact and not sampled:
            disagreements += 1
            assert _refined_distance(curve, x0, y0, s, z) <= 1e-6
    assert disagreements < 100


def test_counting_far_away():
    assert counting_function(cantor_2d(3), HALF, (50.0, 50.0)) == 0


def test_counting_unit_square():
    assert counting_function(cantor_2d(0), HALF, (0.5, 2.5)) == 1


@pytest.mark.parametrize("curve", [HALF, CIRCLE], ids=["halfcircle", "circle"])
def test_pruned_counting_matches_full_scan(curve):
    gen = cantor_2d(2)
    rng = np.random.default_rng(5)
    cx0, cx1, cy0, cy1 = curve.bbox()
    for _ in range(100):
        z = (rng.uniform(-cx1, 1 - cx0), rng.uniform(-cy1, 1 - cy0))
        f = counting_function(gen, curve, z)
        assert f == counting_function_scan(gen, curve, z)
        # Sampling the curve can only miss squares, never invent them.
        assert sum(dense_hit(curve, float(q.x0), float(q.y0), float(q.side), z, 2000) for q in gen.squares) <= f


def test_mc_unit_square_point():
    est = mc_favard_curve(cantor_2d(0), POINT, 10**6, RngSpec(11))
    assert abs(est.value - 1.0) <= 3 * est.error_indicator
    assert est.seed == 11


def test_mc_agrees_with_quadrature():
    gen = cantor_2d(3)
    mc = mc_favard_curve(gen, HALF, 10**6, RngSpec(12))
    q = favard_curve_quadrature(HALF, gen)
    assert abs(mc.value - q.value) <= 3 * (mc.error_indicator + q.error_indicator)


def test_mc_bit_identical_across_threads():
    gen = cantor_2d(3)
    runs = [mc_favard_curve(gen, CIRCLE, 300_000, RngSpec(13), threads=t) for t in (1, 2, 5)]
    assert runs[0].value == runs[1].value == runs[2].value
    assert runs[0].error_indicator == runs[2].error_indicator


def test_rng_substreams():
    a = RngSpec(1, 0).shard(3).random(5)
    assert np.array_equal(a, RngSpec(1, 0).shard(3).random(5))
    assert not np.array_equal(a, RngSpec(1, 1).shard(3).random(5))
    assert not np.array_equal(a, RngSpec(1, 0).shard(4).random(5))
    with pytest.raises(ArgumentError):
        RngSpec(-1)


def test_first_moment_equals_indicator_on_unit_square():
    gen = cantor_2d(0)
    m1, _ = moment_estimate(gen, HALF, 1, 200_000, RngSpec(14))
    mc = mc_favard_curve(gen, HALF, 200_000, RngSpec(14))
    assert m1 == pytest.approx(mc.value, rel=1e-14)


def test_histogram_counts_all_samples():
    area, hist = hit_histogram(cantor_2d(2), HALF, 100_001, RngSpec(15))
    assert hist.sum() == 100_001
    assert area > 0


def test_bad_arguments():
    with pytest.raises(ArgumentError):
        moment_estimate(cantor_2d(1), HALF, 3, 10, RngSpec(1))
    with pytest.raises(ArgumentError):
        mc_favard_curve(cantor_2d(1), HALF, 0, RngSpec(1))


def test_drop_samples_match_counting():
    gen = cantor_2d(2)
    for d in drop_samples(gen, CIRCLE, 50, RngSpec(16)):
        assert d.hit_count == counting_function(gen, CIRCLE, d.z)
        assert 0 <= d.hit_count <= 16


def test_diagonal_overlap_is_single_square_area():
    n = 3
    q = cantor_2d(n).squares[9]
    p = pair_overlap(q, q, HALF, 4.0**-n / 64)
    exact = favard_curve_quadrature(HALF, q.grid()).value
    assert p == pytest.approx(exact, rel=0.02)
    assert 1 <= p / 4.0**-n <= 8


def test_zero_overlap_for_steep_pairs():
    sq = {(q.ix, q.iy): q for q in cantor_2d(2).squares}
    # Centres differ by (3/16, 12/16): k = 1 > l = 0, needs slope 4.
    assert pair_overlap(sq[(0, 0)], sq[(3, 12)], HALF, 1 / 1024) == 0.0


def test_decoupled_first_moment():
    n = 2
    gen = cantor_2d(n)
    m1, se = moment_estimate(gen, HALF, 1, 10**6, RngSpec(17))
    q = gen.squares[0]
    single = pair_overlap(q, q, HALF, 4.0**-n / 64)
    assert m1 == pytest.approx(4**n * single, abs=3 * se + 4**n * 0.01 * single)
