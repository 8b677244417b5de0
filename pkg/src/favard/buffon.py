"""Dropping a curve at random: hit tests, the counting function, Monte Carlo
estimates of |E - C| and of the moments of f_n, and pairwise overlaps p_ij.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cantor import DyadicSquare, SquareGrid, as_grid
from .curve import CurveSpec
from .errors import ArgumentError
from .estimate import FavardEstimate
from .curveproj import sum_set_box

SHARD_SIZE = 1 << 16
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    """Counter-based stream: shard s of (master_seed, stream_id) is a Philox
    generator keyed by those three numbers, so every draw is a pure function
    of (seed, stream, shard, position)."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= _MASK64:
            raise ArgumentError("master_seed must fit in 64 bits")
        if not 0 <= self.stream_id < 1 << 32:
            raise ArgumentError("stream_id must fit in 32 bits")

    def shard(self, index: int) -> np.random.Generator:
        key = np.array([self.master_seed, (self.stream_id << 32) | index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class DropSample:
    z: tuple[float, float]
    hit_count: int


def square_hits_curve(square: DyadicSquare, curve: CurveSpec, z) -> bool:
    """Whether z + C meets the closed square."""
    return counting_function(square.grid(), curve, z) > 0


def counting_function(gen, curve: CurveSpec, z) -> int:
    """f_n(z): number of squares of E met by z + C.

    Only columns whose x-range meets the translated piece domain are
    considered and the rows hit are located by binary search, so the cost
    per sample is O(columns · log rows) rather than O(squares).
    """
    grid = as_grid(gen)
    f = kernels.hit_counts(list(curve.pieces), grid, np.array([float(z[0])]), np.array([float(z[1])]))
    return int(f[0])


def counting_function_scan(gen, curve: CurveSpec, z) -> int:
    """Unpruned reference: test every square individually."""
    grid = as_grid(gen)
    xs, ys = grid.squares_xy()
    total = 0
    for x0, y0 in zip(xs, ys):
        single = SquareGrid(np.array([x0]), np.array([y0]), grid.side)
        total += kernels.hit_counts(list(curve.pieces), single, np.array([z[0]]), np.array([z[1]]))[0] > 0
    return int(total)


def sample_points(grid: SquareGrid, curve: CurveSpec, rng: RngSpec, shard: int, size: int):
    a0, a1, b0, b1 = sum_set_box(curve, grid)
    u = rng.shard(shard).random((2, size))
    return a0 + (a1 - a0) * u[0], b0 + (b1 - b0) * u[1]


def _shard_hist(grid, curve, rng, shard, size):
    z1, z2 = sample_points(grid, curve, rng, shard, size)
    f = kernels.hit_counts(list(curve.pieces), grid, z1, z2)
    return np.bincount(f)


def _default_threads():
    return min(8, os.cpu_count() or 1)


def hit_histogram(gen, curve: CurveSpec, samples: int, rng: RngSpec, threads: int | None = None):
    """(box area, counts[k] = number of samples with f_n = k).

    Samples are split into fixed shards of SHARD_SIZE, each with its own RNG
    substream; integer histograms add exactly, so the result does not depend
    on ``threads``.
    """
    if isinstance(samples, bool) or int(samples) != samples or samples < 1:
        raise ArgumentError(f"samples must be a positive integer, got {samples!r}")
    samples = int(samples)
    grid = as_grid(gen)
    a0, a1, b0, b1 = sum_set_box(curve, grid)
    area = (a1 - a0) * (b1 - b0)
    jobs = [(s, min(SHARD_SIZE, samples - s * SHARD_SIZE)) for s in range(-(-samples // SHARD_SIZE))]
    threads = threads or _default_threads()
    run = lambda job: _shard_hist(grid, curve, rng, *job)
    if threads == 1:
        hists = list(map(run, jobs))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hists = list(pool.map(run, jobs))
    width = max(len(h) for h in hists)
    total = np.zeros(width, dtype=np.int64)
    for h in hists:
        total[: len(h)] += h
    return area, total


def drop_samples(gen, curve: CurveSpec, samples: int, rng: RngSpec) -> list[DropSample]:
    """Raw (z, f_n(z)) records, for CSV emission."""
    grid = as_grid(gen)
    out = []
    for s in range(-(-samples // SHARD_SIZE)):
        size = min(SHARD_SIZE, samples - s * SHARD_SIZE)
        z1, z2 = sample_points(grid, curve, rng, s, size)
        f = kernels.hit_counts(list(curve.pieces), grid, z1, z2)
        out.extend(DropSample((float(a), float(b)), int(c)) for a, b, c in zip(z1, z2, f))
    return out


def mc_favard_curve(gen, curve: CurveSpec, samples: int, rng: RngSpec, threads: int | None = None) -> FavardEstimate:
    area, hist = hit_histogram(gen, curve, samples, rng, threads)
    n = int(hist.sum())
    hits = n - int(hist[0])
    p = hits / n
    params = {"samples": n, "box_area": area, "hits": hits, "stream": rng.stream_id}
    return FavardEstimate(area * p, area * math.sqrt(p * (1 - p) / n), "monte-carlo", params, seed=rng.master_seed)


def moment_from_histogram(area: float, hist, order: int):
    k = np.arange(len(hist), dtype=np.float64)
    n = int(hist.sum())
    vals = k**order
    mean = float(np.dot(hist, vals)) / n
    if n > 1:
        var = float(np.dot(hist, (vals - mean) ** 2)) / (n - 1)
    else:
        var = 0.0
    return area * mean, area * math.sqrt(var / n)


def moment_estimate(gen, curve: CurveSpec, order: int, samples: int, rng: RngSpec, threads: int | None = None):
    """(|B| · mean f_n^order, standard error) with z uniform on the box B ⊇ E - C."""
    if order not in (1, 2):
        raise ArgumentError(f"order must be 1 or 2, got {order!r}")
    area, hist = hit_histogram(gen, curve, samples, rng, threads)
    return moment_from_histogram(area, hist, order)


# ----------------------------------------------------------- pair overlaps


def pair_overlap(qi: DyadicSquare, qj: DyadicSquare, curve: CurveSpec, pitch: float) -> float:
    """Rasterized |(Q_i - C) ∩ (Q_j - C)|.

    The lattice has centres ((i + 1/2) pitch, (j + 1/2) pitch) for all integers
    i, j, so overlaps of different pairs are measured on the same cells.  Per
    lattice column, |A ∩ B| = |A| + |B| - |A ∪ B| in lattice points.
    """
    if not pitch > 0:
        raise ArgumentError("pitch must be positive")
    gi, gj = qi.grid(), qj.grid()
    pieces = list(curve.pieces)
    ai = sum_set_box(curve, gi)
    aj = sum_set_box(curve, gj)
    lo, hi = max(ai[0], aj[0]), min(ai[1], aj[1])
    if lo > hi or max(ai[2], aj[2]) > min(ai[3], aj[3]):
        return 0.0
    first = math.ceil(lo / pitch - 0.5)
    last = math.floor(hi / pitch - 0.5)
    if last < first:
        return 0.0
    alphas = pitch * (np.arange(first, last + 1) + 0.5)
    total = 0
    for a in kernels.chunked(alphas, pieces + pieces, gi):
        lo_i, hi_i = kernels.beta_intervals(pieces, gi, a)
        lo_j, hi_j = kernels.beta_intervals(pieces, gj, a)
        ci = kernels.union_lattice_count(lo_i, hi_i, 0.0, pitch)
        cj = kernels.union_lattice_count(lo_j, hi_j, 0.0, pitch)
        cu = kernels.union_lattice_count(
            np.concatenate([lo_i, lo_j], axis=1), np.concatenate([hi_i, hi_j], axis=1), 0.0, pitch
        )
        total += int((ci + cj - cu).sum())
    return total * pitch * pitch
