"""Result and discretization records shared by the estimators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ArgumentError


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite midpoint rule with ``points`` nodes.

    ``range`` overrides the integration interval (otherwise each estimator
    uses the exact support of its integrand).  The error indicator compares
    against a rule with ``points // 2**refinement`` nodes.
    """

    points: int = 4096
    range: tuple[float, float] | None = None
    refinement: int = 1

    def __post_init__(self):
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 2:
            raise ArgumentError(f"quadrature needs at least 2 points, got {self.points!r}")
        if self.refinement < 1 or self.points >> self.refinement < 1:
            raise ArgumentError("refinement leaves no coarse nodes")
        if self.range is not None and not self.range[0] <= self.range[1]:
            raise ArgumentError(f"bad quadrature range {self.range}")

    @property
    def coarse_points(self) -> int:
        return self.points >> self.refinement


@dataclass(frozen=True)
class FavardEstimate:
    value: float
    error_indicator: float
    method: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    trace: Any = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.value >= 0 or not self.error_indicator >= 0:
            raise ArgumentError(f"negative estimate: {self.value}, {self.error_indicator}")

    def summary(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        return (
            f"method={self.method} {params} seed={self.seed} "
            f"value={self.value:.10g} error={self.error_indicator:.3g}"
        )


def midpoint_nodes(lo: float, hi: float, points: int):
    h = (hi - lo) / points
    return lo + h * (np.arange(points) + 0.5), h
