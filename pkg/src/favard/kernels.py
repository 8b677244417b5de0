"""Vectorized geometry shared by the projection, grid and Monte Carlo code.

Everything works on a ``SquareGrid`` (columns x rows of equal squares) and a
batch of horizontal translations alpha.  For a translate (alpha, beta) + C of
a curve, the squares it meets can be read column by column:

* an over-x piece crosses the column [x0, x0 + side] over the clipped domain
  D = [x0 - alpha, x0 + side - alpha] ∩ I, where it takes the values
  beta + [min_D phi, max_D phi];
* an over-y piece crosses the column where phi(t) ∈ [x0 - alpha, x0 + side - alpha],
  a union of at most two t-intervals (one per monotone branch).
"""
from __future__ import annotations

import numpy as np

from .cantor import SquareGrid
from .curve import GraphPiece
from .intervals import union_components, union_lattice_count, union_measure

CHUNK_ELEMENTS = 1 << 22


def column_ranges(piece: GraphPiece, x_lefts, side: float, alpha):
    """(min, max, valid) of phi over each column's clipped domain.

    ``alpha`` has shape (A,); outputs have shape (A, C).
    """
    alpha = np.asarray(alpha, dtype=float)[..., None]
    lo = np.maximum(x_lefts - alpha, piece.a)
    hi = np.minimum(x_lefts + side - alpha, piece.b)
    valid = lo <= hi
    lo = np.where(valid, lo, piece.a)
    hi = np.where(valid, hi, piece.a)
    m, M = piece.value_range(lo, hi)
    return np.asarray(m, dtype=float), np.asarray(M, dtype=float), valid


def branches(piece: GraphPiece):
    c = piece.profile.critical_point()
    if c is not None and piece.a < c < piece.b:
        return [(piece.a, c), (c, piece.b)]
    return [(piece.a, piece.b)]


def column_preimages(piece: GraphPiece, x_lefts, side: float, alpha):
    """t-intervals of an over-y piece inside each column, one per branch.

    Returns a list of (t_lo, t_hi, valid) triples of shape (A, C).
    """
    alpha = np.asarray(alpha, dtype=float)[..., None]
    u = x_lefts - alpha
    v = u + side
    return [piece.profile.preimage(p, q, u, v) for p, q in branches(piece)]


def beta_intervals(pieces, grid: SquareGrid, alpha):
    """Raw beta-intervals of {beta : (alpha, beta) + C meets the grid}.

    Shape (A, K); empty slots are NaN.  Each block of rows comes from one
    (piece, column[, branch]) combination times every grid row.
    """
    y = grid.y_lefts
    side = grid.side
    los, his = [], []
    for piece in pieces:
        if piece.axis == "x":
            m, M, valid = column_ranges(piece, grid.x_lefts, side, alpha)
            parts = [(y[None, None, :] - M[..., None], y[None, None, :] + side - m[..., None], valid)]
        else:
            parts = [
                (y[None, None, :] - t_hi[..., None], y[None, None, :] + side - t_lo[..., None], valid)
                for t_lo, t_hi, valid in column_preimages(piece, grid.x_lefts, side, alpha)
            ]
        for lo, hi, valid in parts:
            lo = np.where(valid[..., None], lo, np.nan)
            hi = np.where(valid[..., None], hi, np.nan)
            los.append(lo.reshape(lo.shape[0], -1))
            his.append(hi.reshape(hi.shape[0], -1))
    return np.concatenate(los, axis=1), np.concatenate(his, axis=1)


def slots_per_alpha(pieces, grid: SquareGrid) -> int:
    per = 0
    for piece in pieces:
        nb = 1 if piece.axis == "x" else len(branches(piece))
        per += nb * len(grid.x_lefts) * len(grid.y_lefts)
    return per


def chunked(alpha, pieces, grid: SquareGrid):
    alpha = np.asarray(alpha, dtype=float)
    step = max(1, CHUNK_ELEMENTS // max(1, slots_per_alpha(pieces, grid)))
    for i in range(0, len(alpha), step):
        yield alpha[i : i + step]


def projection_measures(pieces, grid: SquareGrid, alpha) -> np.ndarray:
    """|Phi_alpha(E)| for every alpha (all pieces merged before measuring)."""
    out = [union_measure(*beta_intervals(pieces, grid, a)) for a in chunked(alpha, pieces, grid)]
    return np.concatenate(out) if out else np.zeros(0)


def lattice_columns(pieces, grid: SquareGrid, alpha, origin: float, pitch: float):
    """Per alpha: (lattice points in Phi_alpha(E), number of components)."""
    counts, comps = [], []
    for a in chunked(alpha, pieces, grid):
        lo, hi = beta_intervals(pieces, grid, a)
        counts.append(union_lattice_count(lo, hi, origin, pitch))
        comps.append(union_components(lo, hi))
    if not counts:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(counts), np.concatenate(comps)


def alpha_support(pieces, grid: SquareGrid):
    """Exact interval of alpha with Phi_alpha(E) non-empty (union over pieces, hull)."""
    lo, hi = np.inf, -np.inf
    gx0, gx1 = float(grid.x_lefts[0]), float(grid.x_lefts[-1] + grid.side)
    for p in pieces:
        if p.axis == "x":
            lo, hi = min(lo, gx0 - p.b), max(hi, gx1 - p.a)
        else:
            m, M = (float(v) for v in p.value_range())
            lo, hi = min(lo, gx0 - M), max(hi, gx1 - m)
    return lo, hi


# ------------------------------------------------------ per-sample counting


def row_spans(piece: GraphPiece, grid: SquareGrid, z1, z2):
    """For an over-x piece and samples z: rows [r0, r0 + cnt) hit in each column.

    Closed-set semantics: row y0 is hit iff [y0, y0 + side] meets z2 + [m, M].
    """
    m, M, valid = column_ranges(piece, grid.x_lefts, grid.side, z1)
    z2 = np.asarray(z2, dtype=float)[:, None]
    r0 = np.searchsorted(grid.y_lefts, z2 + m - grid.side, side="left")
    r1 = np.searchsorted(grid.y_lefts, z2 + M, side="right")
    cnt = np.where(valid, np.maximum(r1 - r0, 0), 0)
    return r0, cnt


def hit_counts(pieces, grid: SquareGrid, z1, z2) -> np.ndarray:
    """f(z) = number of grid squares met by z + C, for each sample."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    n_rows = len(grid.y_lefts)
    if len(pieces) == 1:
        p = pieces[0]
        if p.axis == "x":
            return row_spans(p, grid, z1, z2)[1].sum(axis=1)
        return row_spans(p.transposed(), grid.transposed(), z2, z1)[1].sum(axis=1)

    keys = []
    for p in pieces:
        if p.axis == "x":
            r0, cnt = row_spans(p, grid, z1, z2)
            outer = np.broadcast_to(np.arange(r0.shape[1]), r0.shape)
            transpose = False
        else:
            r0, cnt = row_spans(p.transposed(), grid.transposed(), z2, z1)
            outer = np.broadcast_to(np.arange(r0.shape[1]), r0.shape)
            transpose = True
        flat = cnt.ravel()
        if not flat.any():
            continue
        sample = np.repeat(np.broadcast_to(np.arange(r0.shape[0])[:, None], r0.shape).ravel(), flat)
        o = np.repeat(outer.ravel(), flat)
        start = np.repeat(r0.ravel(), flat)
        offs = np.arange(flat.sum()) - np.repeat(np.cumsum(flat) - flat, flat)
        inner = start + offs
        col, row = (inner, o) if transpose else (o, inner)
        keys.append(sample.astype(np.int64) * grid.size + col * n_rows + row)
    out = np.zeros(len(z1), dtype=np.int64)
    if keys:
        uniq = np.unique(np.concatenate(keys))
        out += np.bincount(uniq // grid.size, minlength=len(z1))
    return out
