"""Power-law fits value ≈ e^intercept · n^exponent in log-log coordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InsufficientDataError


@dataclass(frozen=True)
class DecayFit:
    points: list[tuple[int, float]]
    exponent: float
    intercept: float
    r_squared: float
    min_value_times_n: float


def fit_decay(points) -> DecayFit:
    """Ordinary least squares of log(value) on log(n), positive values only."""
    pts = [(int(n), float(v)) for n, v in points]
    if any(n < 1 for n, _ in pts):
        raise ArgumentError("decay fits need n >= 1")
    used = [(n, v) for n, v in pts if v > 0 and math.isfinite(v)]
    if len(used) < 3:
        raise InsufficientDataError(f"need at least 3 positive points, got {len(used)}")
    x = np.log([n for n, _ in used])
    y = np.log([v for _, v in used])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return DecayFit(
        points=used,
        exponent=float(slope),
        intercept=float(intercept),
        r_squared=min(1.0, max(0.0, r2)),
        min_value_times_n=min(v * n for n, v in used),
    )
