"""Curve projections Φ_α(E) and the Favard curve length

    Fav_C(E) = ∫ |Φ_α(E)| dα = |E - C|,

estimated by α-quadrature or by rasterizing the sum set E - C.
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels
from .cantor import Generation, SquareGrid, as_grid, cantor_numerators, _check_n
from .curve import CurveSpec, GraphPiece, parabolic_extension, tangent_angle_map
from .errors import (
    ArgumentError,
    AxisMismatchError,
    CurvatureZeroError,
    MixedAxisError,
    PreconditionError,
)
from .estimate import FavardEstimate, QuadratureSpec, midpoint_nodes
from .intervals import IntervalSet, from_arrays
from .linproj import shadow_measures


def phi_alpha_set(piece: GraphPiece, alpha: float, gen) -> IntervalSet:
    """Φ_α(E) for one over-x piece: β with (α, β) + piece meeting E."""
    if piece.axis != "x":
        raise AxisMismatchError("phi_alpha_set needs an over-x piece; use psi_beta_set")
    lo, hi = kernels.beta_intervals([piece], as_grid(gen), np.array([float(alpha)]))
    return from_arrays(lo, hi)


def psi_beta_set(piece: GraphPiece, beta: float, gen) -> IntervalSet:
    """Ψ_β(E) for one over-y piece: α with (α, β) + piece meeting E."""
    if piece.axis != "y":
        raise AxisMismatchError("psi_beta_set needs an over-y piece; use phi_alpha_set")
    grid = as_grid(gen).transposed()
    lo, hi = kernels.beta_intervals([piece.transposed()], grid, np.array([float(beta)]))
    return from_arrays(lo, hi)


def _oriented(curve: CurveSpec, grid: SquareGrid):
    axes = curve.axes
    if axes == {"x"}:
        return list(curve.pieces), grid, "alpha"
    if axes == {"y"}:
        return [p.transposed() for p in curve.pieces], grid.transposed(), "beta"
    raise MixedAxisError("curve mixes over-x and over-y pieces; use the grid or Monte Carlo estimator")


def jump_points(pieces, grid: SquareGrid) -> np.ndarray:
    """α where a piece endpoint enters or leaves a column: |Φ_α(E)| may jump there."""
    pts = []
    for p in pieces:
        pts.append(grid.x_lefts - p.b)
        pts.append(grid.x_lefts + grid.side - p.a)
    return np.unique(np.concatenate(pts))


def panel_midpoints(lo: float, hi: float, points: int, breaks=()):
    """Composite midpoint nodes and weights on [lo, hi] split at ``breaks``.

    Roughly ``points`` nodes in total, spread in proportion to panel length
    with at least one per panel.
    """
    cuts = np.unique(np.concatenate([[lo, hi], np.clip(np.asarray(breaks, dtype=float), lo, hi)]))
    lengths = np.diff(cuts)
    keep = lengths > 0
    cuts_lo, lengths = cuts[:-1][keep], lengths[keep]
    if lengths.size == 0:
        return np.array([lo]), np.array([0.0])
    counts = np.maximum(1, np.round(points * lengths / lengths.sum()).astype(np.int64))
    h = np.repeat(lengths / counts, counts)
    start = np.repeat(cuts_lo, counts)
    local = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    return start + h * (local + 0.5), h


def favard_curve_quadrature(curve: CurveSpec, gen, quad: QuadratureSpec | None = None) -> FavardEstimate:
    """Midpoint rule for ∫ |Φ_α(E)| dα over the exact support of the integrand.

    The range is cut into panels at the α where |Φ_α(E)| can jump (a curve
    endpoint crossing a column edge), so each panel sees a continuous
    integrand.  Curves made only of over-y pieces are handled by
    integrating |Ψ_β(E)| dβ.
    """
    quad = quad or QuadratureSpec()
    pieces, grid, var = _oriented(curve, as_grid(gen))
    lo, hi = quad.range or kernels.alpha_support(pieces, grid)
    breaks = jump_points(pieces, grid)
    nodes, h = panel_midpoints(lo, hi, quad.points, breaks)
    vals = kernels.projection_measures(pieces, grid, nodes)
    value = math.fsum(h * vals)
    cnodes, ch = panel_midpoints(lo, hi, quad.coarse_points, breaks)
    coarse = math.fsum(ch * kernels.projection_measures(pieces, grid, cnodes))
    params = {"points": len(nodes), "variable": var, "range": (lo, hi), "curve": curve.name}
    return FavardEstimate(value, abs(value - coarse), "quadrature", params, trace=np.column_stack([nodes, vals]))


def _default_pitch(gen) -> float:
    return as_grid(gen).side / 16.0


def sum_set_box(curve: CurveSpec, grid: SquareGrid):
    """Bounding box of E - C: (x_lo, x_hi, y_lo, y_hi)."""
    gx0, gx1, gy0, gy1 = grid.bbox
    cx0, cx1, cy0, cy1 = curve.bbox()
    return gx0 - cx1, gx1 - cx0, gy0 - cy1, gy1 - cy0


def _column_pass(pieces, grid, a0, a1, b0, pitch):
    ncol = max(1, int(math.ceil((a1 - a0) / pitch)))
    centers = a0 + pitch * (np.arange(ncol) + 0.5)
    return kernels.lattice_columns(pieces, grid, centers, b0, pitch)


def favard_curve_grid(curve: CurveSpec, gen, pitch: float | None = None) -> FavardEstimate:
    """Rasterize E - C on a lattice of the given pitch anchored at its bounding box.

    A cell centre z counts iff z + C meets E.  Counting is done one lattice
    column at a time against the exact column slice Φ_α(E).  The error
    indicator is pitch times an L1 perimeter estimate of the sum set, taken
    from the number of connected runs in every lattice column and row.
    """
    pitch = _default_pitch(gen) if pitch is None else float(pitch)
    if not pitch > 0:
        raise ArgumentError("pitch must be positive")
    grid = as_grid(gen)
    pieces = list(curve.pieces)
    a0, a1, b0, b1 = sum_set_box(curve, grid)
    counts, comps = _column_pass(pieces, grid, a0, a1, b0, pitch)
    tpieces = [p.transposed() for p in pieces]
    _, rcomps = _column_pass(tpieces, grid.transposed(), b0, b1, a0, pitch)
    total = int(counts.sum())
    perimeter = 2.0 * pitch * (int(comps.sum()) + int(rcomps.sum()))
    params = {"pitch": pitch, "box": (a0, a1, b0, b1), "cells": total, "curve": curve.name}
    return FavardEstimate(total * pitch * pitch, perimeter * pitch, "grid", params)


# -------------------------------------------------------- local comparison


def block_grid(n: int, block_index: int):
    """(members grid, lower-left member centre) of one block of K_n."""
    n = _check_n(n)
    if n % 2:
        raise ArgumentError(f"blocks need even n, got {n}")
    m = n // 2
    sub = cantor_numerators(m)
    count = len(sub) ** 2
    if not 0 <= block_index < count:
        raise ArgumentError(f"block_index must be in [0, {count}), got {block_index}")
    bx, by = int(sub[block_index // len(sub)]), int(sub[block_index % len(sub)])
    grid = SquareGrid.from_numerators(n, bx * 4**m + sub, by * 4**m + sub)
    d = 4.0**-n
    z0 = ((bx * 4**m + 0.5) * d, (by * 4**m + 0.5) * d)
    return grid, z0


def local_block_comparison(
    curve: CurveSpec, n: int, block_index: int, alpha_samples: int = 64, pad: float | None = None
):
    """Rows (α, |Φ_α(block)|, 2^{-n} |proj_θ(K_{n/2})|, ratio).

    θ = θ_{z0}(α) is taken from the piece extended parabolically by ``pad``
    (default: the block side 2^{-n}) so that it is defined for every α whose
    vertical strip meets the block.
    """
    if len(curve.pieces) != 1:
        raise PreconditionError("local comparison needs a single graph piece")
    piece = curve.pieces[0]
    if piece.axis != "x":
        raise AxisMismatchError("local comparison needs an over-x piece")
    if piece.degenerate:
        raise CurvatureZeroError("local comparison needs non-zero curvature")
    if alpha_samples < 1:
        raise ArgumentError("alpha_samples must be positive")
    grid, z0 = block_grid(n, block_index)
    scale = 2.0**-n
    ext = parabolic_extension(piece, scale if pad is None else pad)
    lo, hi = kernels.alpha_support([piece], grid)
    alphas, _ = midpoint_nodes(lo, hi, alpha_samples)
    lhs = kernels.projection_measures([piece], grid, alphas)
    thetas = np.array([tangent_angle_map(ext, z0, a) for a in alphas])
    rhs = scale * shadow_measures(Generation(n // 2), thetas)
    return [(float(a), float(l), float(r), float(l / r)) for a, l, r in zip(alphas, lhs, rhs)]
