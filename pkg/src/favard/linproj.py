"""Orthogonal projections of K_n, the Favard length, and the intercept shadow.

Convention: the Favard length is the un-normalized integral
    Fav(E) = ∫_0^π |proj_θ(E)| dθ,   proj_θ(x, y) = x cos θ + y sin θ,
so Fav([0,1]^2) = 4.  Divide by π for the average shadow length.
"""
from __future__ import annotations

import math

import numpy as np

from .cantor import as_grid
from .estimate import FavardEstimate, QuadratureSpec, midpoint_nodes
from .errors import ArgumentError
from .intervals import IntervalSet, from_arrays

NORMALIZATION = "integral over [0, pi) of shadow length, not divided by pi"


def _centers(grid, c, s):
    xc = grid.x_lefts + 0.5 * grid.side
    yc = grid.y_lefts + 0.5 * grid.side
    return (np.multiply.outer(c, xc)[..., :, None] + np.multiply.outer(s, yc)[..., None, :]).reshape(
        *np.shape(c), -1
    )


def shadow(gen, theta: float) -> IntervalSet:
    """{x cos θ + y sin θ : (x, y) ∈ E} as an interval set."""
    grid = as_grid(gen)
    theta = float(theta) % math.pi
    c, s = math.cos(theta), math.sin(theta)
    half = 0.5 * grid.side * (abs(c) + abs(s))
    centers = _centers(grid, np.float64(c), np.float64(s))
    return from_arrays(centers - half, centers + half)


def shadow_measures(gen, thetas) -> np.ndarray:
    """|proj_θ(E)| for an array of angles (equal-width interval sweep)."""
    grid = as_grid(gen)
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty(thetas.shape)
    step = max(1, (1 << 22) // grid.size)
    flat_t, flat_o = thetas.ravel(), out.reshape(-1)
    for i in range(0, flat_t.size, step):
        t = flat_t[i : i + step]
        c, s = np.cos(t), np.sin(t)
        w = grid.side * (np.abs(c) + np.abs(s))
        centers = np.sort(_centers(grid, c, s), axis=-1)
        gaps = np.minimum(np.diff(centers, axis=-1), w[:, None])
        flat_o[i : i + step] = w + gaps.sum(axis=-1)
    return out


def intercept_shadow(gen, slope: float) -> IntervalSet:
    """{y - slope * x : (x, y) ∈ E}: intercepts of slope lines meeting E."""
    if not math.isfinite(slope):
        raise ArgumentError("slope must be finite")
    grid = as_grid(gen)
    d = grid.side
    base = (grid.y_lefts[None, :] - slope * grid.x_lefts[:, None]).ravel()
    lo = base - max(0.0, slope * d)
    hi = base + d - min(0.0, slope * d)
    return from_arrays(lo, hi)


def favard_length(gen, quad: QuadratureSpec | None = None) -> FavardEstimate:
    """Midpoint rule on [0, π/4] times 4 (dihedral symmetry of K_n).

    An explicit ``quad.range`` is integrated as given, without the factor 4.
    """
    quad = quad or QuadratureSpec()
    lo, hi = quad.range or (0.0, math.pi / 4)
    sym = 4.0 if quad.range is None else 1.0
    nodes, h = midpoint_nodes(lo, hi, quad.points)
    vals = shadow_measures(gen, nodes)
    value = sym * h * math.fsum(vals)
    cnodes, ch = midpoint_nodes(lo, hi, quad.coarse_points)
    coarse = sym * ch * math.fsum(shadow_measures(gen, cnodes))
    params = {"points": quad.points, "range": (lo, hi), "symmetry": int(sym), "normalization": NORMALIZATION}
    return FavardEstimate(value, abs(value - coarse), "quadrature", params, trace=np.column_stack([nodes, vals]))
