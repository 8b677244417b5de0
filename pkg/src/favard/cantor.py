"""Generations of the middle-half Cantor set C_n and the four-corner set K_n.

Every coordinate is an integer numerator over 4**n.  Floats only appear in
``SquareGrid``, the array view consumed by the geometry kernels.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ArgumentError, BoundsError

N_MAX = 12


def _check_n(n, n_max=N_MAX):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise BoundsError(f"generation must be an integer, got {n!r}")
    if n < 0 or n > n_max:
        raise BoundsError(f"generation {n} outside [0, {n_max}]")
    return int(n)


def _is_cantor_numerator(num: int, n: int) -> bool:
    if num < 0 or num >= 4**n:
        return False
    for _ in range(n):
        if num % 4 not in (0, 3):
            return False
        num //= 4
    return True


def cantor_numerators(n: int) -> np.ndarray:
    """Sorted numerators of the 2**n intervals of C_n (int64)."""
    nums = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        nums = (4 * nums[:, None] + np.array([0, 3], dtype=np.int64)).ravel()
    return nums


def dyadic_str(num: int, n: int) -> str:
    """Exact decimal expansion of num / 4**n."""
    if n == 0:
        return str(num)
    digits = 2 * n
    scaled = num * 5**digits  # num/4^n = num*5^(2n) / 10^(2n)
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    whole, frac = s[:-digits], s[-digits:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


@dataclass(frozen=True, order=True)
class DyadicInterval:
    n: int
    num: int

    def __post_init__(self):
        if not _is_cantor_numerator(self.num, self.n):
            raise ArgumentError(f"{self.num} is not a C_{self.n} numerator")

    @property
    def width(self) -> Fraction:
        return Fraction(1, 4**self.n)

    @property
    def lo(self) -> Fraction:
        return Fraction(self.num, 4**self.n)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.num + 1, 4**self.n)

    @property
    def center(self) -> Fraction:
        return Fraction(2 * self.num + 1, 2 * 4**self.n)

    def digits(self) -> tuple[int, ...]:
        """Base-4 digits a_1..a_n, most significant first."""
        out, num = [], self.num
        for _ in range(self.n):
            out.append(num % 4)
            num //= 4
        return tuple(reversed(out))


@dataclass(frozen=True, order=True)
class DyadicSquare:
    n: int
    ix: int
    iy: int

    def __post_init__(self):
        if not (_is_cantor_numerator(self.ix, self.n) and _is_cantor_numerator(self.iy, self.n)):
            raise ArgumentError(f"({self.ix}, {self.iy}) is not a K_{self.n} square")

    @classmethod
    def _trusted(cls, n, ix, iy):
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "ix", ix)
        object.__setattr__(obj, "iy", iy)
        return obj

    @property
    def side(self) -> Fraction:
        return Fraction(1, 4**self.n)

    @property
    def x0(self) -> Fraction:
        return Fraction(self.ix, 4**self.n)

    @property
    def y0(self) -> Fraction:
        return Fraction(self.iy, 4**self.n)

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        d = 2 * 4**self.n
        return Fraction(2 * self.ix + 1, d), Fraction(2 * self.iy + 1, d)

    @property
    def x_interval(self) -> DyadicInterval:
        return DyadicInterval(self.n, self.ix)

    @property
    def y_interval(self) -> DyadicInterval:
        return DyadicInterval(self.n, self.iy)

    def grid(self) -> "SquareGrid":
        return SquareGrid.from_numerators(self.n, [self.ix], [self.iy])


@dataclass(frozen=True)
class SquareGrid:
    """Product set of squares: every column left edge times every row left edge.

    K_n, the blocks of its half-generation decomposition and single squares
    all have this shape, which the kernels exploit for pruning.
    """

    x_lefts: np.ndarray
    y_lefts: np.ndarray
    side: float

    @classmethod
    def from_numerators(cls, n, ix, iy, offset=(0.0, 0.0)):
        scale = 4.0**-n
        xl = np.asarray(ix, dtype=np.float64) * scale + offset[0]
        yl = np.asarray(iy, dtype=np.float64) * scale + offset[1]
        return cls(np.sort(xl), np.sort(yl), scale)

    @property
    def size(self) -> int:
        return len(self.x_lefts) * len(self.y_lefts)

    @property
    def bbox(self):
        return (
            float(self.x_lefts[0]),
            float(self.x_lefts[-1] + self.side),
            float(self.y_lefts[0]),
            float(self.y_lefts[-1] + self.side),
        )

    def transposed(self) -> "SquareGrid":
        return SquareGrid(self.y_lefts, self.x_lefts, self.side)

    def squares_xy(self):
        """Lower-left corners of all squares, column-major (x outer)."""
        xs = np.repeat(self.x_lefts, len(self.y_lefts))
        ys = np.tile(self.y_lefts, len(self.x_lefts))
        return xs, ys


@dataclass(frozen=True)
class Generation:
    """K_n = C_n x C_n.  Squares are enumerated lexicographically in (ix, iy).

    ``offset`` translates the whole set; it exists for translation-invariance
    checks and defaults to the origin.
    """

    n: int
    offset: tuple[float, float] = (0.0, 0.0)
    _nums: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "_nums", cantor_numerators(self.n))

    @property
    def numerators(self) -> np.ndarray:
        return self._nums

    @property
    def side(self) -> float:
        return 4.0**-self.n

    def __len__(self) -> int:
        return 4**self.n

    def iter_squares(self) -> Iterator[DyadicSquare]:
        nums = [int(v) for v in self._nums]
        for ix in nums:
            for iy in nums:
                yield DyadicSquare._trusted(self.n, ix, iy)

    @property
    def squares(self) -> list[DyadicSquare]:
        return list(self.iter_squares())

    def grid(self) -> SquareGrid:
        return SquareGrid.from_numerators(self.n, self._nums, self._nums, self.offset)

    def translated(self, v) -> "Generation":
        return Generation(self.n, (self.offset[0] + v[0], self.offset[1] + v[1]))


def cantor_1d(n: int) -> list[DyadicInterval]:
    n = _check_n(n)
    return [DyadicInterval(n, int(v)) for v in cantor_numerators(n)]


def cantor_2d(n: int) -> Generation:
    return Generation(_check_n(n))


def half_generation_blocks(n: int) -> list[tuple[DyadicSquare, list[DyadicSquare]]]:
    """Split K_n into the 2**n blocks K_n ∩ Q, Q a square of K_{n/2}."""
    n = _check_n(n)
    if n % 2:
        raise ArgumentError(f"half_generation_blocks needs even n, got {n}")
    m = n // 2
    sub = [int(v) for v in cantor_numerators(m)]
    blocks = []
    for bx in sub:
        for by in sub:
            block = DyadicSquare._trusted(m, bx, by)
            members = [
                DyadicSquare._trusted(n, bx * 4**m + cx, by * 4**m + cy)
                for cx in sub
                for cy in sub
            ]
            blocks.append((block, members))
    return blocks


def grid_of(squares: Sequence[DyadicSquare]) -> SquareGrid:
    """SquareGrid of a list of same-generation squares forming a product set."""
    if not squares:
        raise ArgumentError("empty square list")
    n = squares[0].n
    if any(q.n != n for q in squares):
        raise ArgumentError("squares from different generations")
    xs = sorted({q.ix for q in squares})
    ys = sorted({q.iy for q in squares})
    if len(xs) * len(ys) != len(set(squares)):
        raise ArgumentError("square list is not a product set")
    return SquareGrid.from_numerators(n, xs, ys)


def as_grid(obj) -> SquareGrid:
    if isinstance(obj, SquareGrid):
        return obj
    if isinstance(obj, Generation):
        return obj.grid()
    if isinstance(obj, DyadicSquare):
        return obj.grid()
    return grid_of(list(obj))


def squares_csv(gen: Generation, out=None) -> str | None:
    """Write ``n,ix,iy,x0,y0,side`` rows; returns the text when ``out`` is None."""
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "ix", "iy", "x0", "y0", "side"])
    side = dyadic_str(1, gen.n)
    for q in gen.iter_squares():
        w.writerow([q.n, q.ix, q.iy, dyadic_str(q.ix, q.n), dyadic_str(q.iy, q.n), side])
    return buf.getvalue() if out is None else None
