"""Favard length and Favard curve length of four-corner Cantor set generations."""
from .cantor import (
    DyadicInterval,
    DyadicSquare,
    Generation,
    SquareGrid,
    cantor_1d,
    cantor_2d,
    half_generation_blocks,
)
from .curve import CurveSpec, GraphPiece, decompose, parse_curve
from .estimate import FavardEstimate, QuadratureSpec
from .intervals import IntervalSet, from_raw, measure, vitali_delta_cover

__version__ = "0.1.0"
