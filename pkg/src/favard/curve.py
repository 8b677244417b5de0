"""Admissible curves as unions of graph pieces.

A piece over x is {(t, phi(t)) : t in [a, b]}; a piece over y is
{(phi(t), t) : t in [a, b]}.  Profiles carry closed-form phi, phi', phi''
where one exists and fall back to numerical inversion of a parametric
curve otherwise.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import (
    ArgumentError,
    AxisMismatchError,
    CurvatureZeroError,
    CurveSpecError,
    OutOfDomainError,
    UnsupportedCurveError,
)
from .intervals import IntervalSet

LAMBDA_SAMPLES = 2**14
LAMBDA_MARGIN = 1.05


def bisect_monotone(f: Callable, lo, hi, target, iters: int = 200):
    """Vectorized root of f(x) = target for f monotone on [lo, hi]."""
    lo, hi, target = np.broadcast_arrays(
        np.asarray(lo, dtype=float), np.asarray(hi, dtype=float), np.asarray(target, dtype=float)
    )
    lo, hi = lo.copy(), hi.copy()
    increasing = f(hi) >= f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        fm = f(mid)
        right = np.where(increasing, fm < target, fm > target)
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    return 0.5 * (lo + hi)


def monotone_preimage(f: Callable, p: float, q: float, u, v):
    """(lo, hi, valid) with [lo, hi] = {x in [p, q] : u <= f(x) <= v}, f monotone."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    fp, fq = float(f(p)), float(f(q))
    valid = (u <= max(fp, fq)) & (v >= min(fp, fq))
    if fq >= fp:
        lo = np.where(u <= fp, p, bisect_monotone(f, p, q, u))
        hi = np.where(v >= fq, q, bisect_monotone(f, p, q, v))
    else:
        lo = np.where(v >= fp, p, bisect_monotone(f, p, q, v))
        hi = np.where(u <= fq, q, bisect_monotone(f, p, q, u))
    return lo, hi, valid


# ------------------------------------------------------------------ profiles


class Profile:
    """phi and its first two derivatives as vectorized callables."""

    kind = "generic"
    degenerate = False

    def phi(self, t):
        raise NotImplementedError

    def dphi(self, t):
        raise NotImplementedError

    def d2phi(self, t):
        raise NotImplementedError

    def critical_point(self):
        """The unique t with phi'(t) = 0, or None (may lie outside any domain)."""
        return None

    def dphi_inv(self, s, a, b):
        return bisect_monotone(self.dphi, a, b, s)

    def curvature_bounds(self, a, b):
        """(min, max) of |phi''| on [a, b]; sampled unless overridden."""
        t = np.linspace(a, b, LAMBDA_SAMPLES)
        k = np.abs(self.d2phi(t))
        return float(k.min()) / LAMBDA_MARGIN, float(k.max()) * LAMBDA_MARGIN

    def arclength(self, a, b):
        val, _ = integrate.quad(lambda t: math.sqrt(1.0 + float(self.dphi(t)) ** 2), a, b, limit=200)
        return val

    def preimage(self, p: float, q: float, u, v):
        """{t in [p, q] : u <= phi(t) <= v} for phi monotone on [p, q].

        Returns (t_lo, t_hi, valid) arrays broadcast against u and v.
        """
        return monotone_preimage(self.phi, p, q, u, v)

    def value_range(self, lo, hi):
        """Exact (min, max) of phi on [lo, hi] via the single critical point."""
        flo, fhi = self.phi(lo), self.phi(hi)
        m, M = np.minimum(flo, fhi), np.maximum(flo, fhi)
        c = self.critical_point()
        if c is not None:
            inside = (lo <= c) & (c <= hi)
            if np.any(inside):
                fc = float(self.phi(np.float64(c)))
                m = np.where(inside, np.minimum(m, fc), m)
                M = np.where(inside, np.maximum(M, fc), M)
        return m, M

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class EllipticArc(Profile):
    """phi(t) = sign * b * sqrt(1 - (t/a)^2); a == b is a circular arc."""

    a: float
    b: float
    sign: int = -1

    @property
    def kind(self):
        return "circular-arc" if self.a == self.b else "elliptic-arc"

    def _root(self, t):
        return np.sqrt(np.maximum(1.0 - (np.asarray(t, dtype=float) / self.a) ** 2, 0.0))

    def phi(self, t):
        return self.sign * self.b * self._root(t)

    def dphi(self, t):
        t = np.asarray(t, dtype=float)
        return -self.sign * self.b * t / (self.a**2 * self._root(t))

    def d2phi(self, t):
        return -self.sign * self.b / (self.a**2 * self._root(t) ** 3)

    def critical_point(self):
        return 0.0

    def dphi_inv(self, s, a=None, b=None):
        q = -self.sign * np.asarray(s, dtype=float) * self.a / self.b
        return self.a * q / np.sqrt(1.0 + q * q)

    def curvature_bounds(self, a, b):
        near = 0.0 if a <= 0.0 <= b else min(abs(a), abs(b))
        far = max(abs(a), abs(b))
        return float(abs(self.d2phi(near))), float(abs(self.d2phi(far)))

    def describe(self):
        if self.a == self.b:
            return {"kind": self.kind, "R": self.a, "sign": self.sign}
        return {"kind": self.kind, "a": self.a, "b": self.b, "sign": self.sign}


@dataclass(frozen=True, eq=False)
class Parabola(Profile):
    c2: float
    c1: float = 0.0
    c0: float = 0.0
    kind = "parabola"

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        return (self.c2 * t + self.c1) * t + self.c0

    def dphi(self, t):
        return 2.0 * self.c2 * np.asarray(t, dtype=float) + self.c1

    def d2phi(self, t):
        return np.full_like(np.asarray(t, dtype=float), 2.0 * self.c2)

    def critical_point(self):
        return -self.c1 / (2.0 * self.c2)

    def dphi_inv(self, s, a=None, b=None):
        return (np.asarray(s, dtype=float) - self.c1) / (2.0 * self.c2)

    def curvature_bounds(self, a, b):
        k = abs(2.0 * self.c2)
        return k, k

    def describe(self):
        return {"kind": self.kind, "c2": self.c2, "c1": self.c1, "c0": self.c0}


@dataclass(frozen=True, eq=False)
class Segment(Profile):
    slope: float
    intercept: float = 0.0
    kind = "segment"
    degenerate = True

    def phi(self, t):
        return self.slope * np.asarray(t, dtype=float) + self.intercept

    def dphi(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.slope)

    def d2phi(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def dphi_inv(self, s, a=None, b=None):
        raise CurvatureZeroError("phi' is constant on a segment")

    def curvature_bounds(self, a, b):
        return 0.0, 0.0

    def preimage(self, p, q, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        if self.slope == 0.0:
            valid = (u <= self.intercept) & (self.intercept <= v)
            return np.full(valid.shape, float(p)), np.full(valid.shape, float(q)), valid
        t1 = (u - self.intercept) / self.slope
        t2 = (v - self.intercept) / self.slope
        t_lo = np.maximum(p, np.minimum(t1, t2))
        t_hi = np.minimum(q, np.maximum(t1, t2))
        return t_lo, t_hi, t_lo <= t_hi

    def arclength(self, a, b):
        return (b - a) * math.hypot(1.0, self.slope)

    def describe(self):
        return {"kind": self.kind, "slope": self.slope, "intercept": self.intercept}


@dataclass(frozen=True, eq=False)
class Shifted(Profile):
    """t -> base.phi(t - dt) + dv."""

    base: Profile
    dt: float
    dv: float

    @property
    def kind(self):
        return self.base.kind

    @property
    def degenerate(self):
        return self.base.degenerate

    def phi(self, t):
        return self.base.phi(np.asarray(t, dtype=float) - self.dt) + self.dv

    def dphi(self, t):
        return self.base.dphi(np.asarray(t, dtype=float) - self.dt)

    def d2phi(self, t):
        return self.base.d2phi(np.asarray(t, dtype=float) - self.dt)

    def critical_point(self):
        c = self.base.critical_point()
        return None if c is None else c + self.dt

    def dphi_inv(self, s, a, b):
        return self.base.dphi_inv(s, a - self.dt, b - self.dt) + self.dt

    def preimage(self, p, q, u, v):
        t_lo, t_hi, valid = self.base.preimage(
            p - self.dt, q - self.dt, np.asarray(u, dtype=float) - self.dv, np.asarray(v, dtype=float) - self.dv
        )
        return t_lo + self.dt, t_hi + self.dt, valid

    def curvature_bounds(self, a, b):
        return self.base.curvature_bounds(a - self.dt, b - self.dt)

    def arclength(self, a, b):
        return self.base.arclength(a - self.dt, b - self.dt)

    def describe(self):
        return {**self.base.describe(), "shift": (self.dt, self.dv)}


@dataclass(frozen=True, eq=False)
class ParabolicExtension(Profile):
    """base on [a, b], continued by its second-order Taylor polynomial outside."""

    base: Profile
    a: float
    b: float

    @property
    def kind(self):
        return self.base.kind

    @cached_property
    def _ends(self):
        a, b = self.a, self.b
        va, vb = (float(self.base.phi(x)) for x in (a, b))
        sa, sb = (float(self.base.dphi(x)) for x in (a, b))
        ka, kb = (float(self.base.d2phi(x)) for x in (a, b))
        return (va, sa, ka), (vb, sb, kb)

    def left(self, t):
        (v, s, k), _ = self._ends
        d = np.asarray(t, dtype=float) - self.a
        return v + s * d + 0.5 * k * d * d

    def right(self, t):
        _, (v, s, k) = self._ends
        d = np.asarray(t, dtype=float) - self.b
        return v + s * d + 0.5 * k * d * d

    def _pick(self, t, lf, mf, rf):
        t = np.asarray(t, dtype=float)
        tc = np.clip(t, self.a, self.b)
        return np.where(t < self.a, lf(t), np.where(t > self.b, rf(t), mf(tc)))

    def phi(self, t):
        return self._pick(t, self.left, self.base.phi, self.right)

    def dphi(self, t):
        (_, sa, ka), (_, sb, kb) = self._ends
        return self._pick(
            t, lambda x: sa + ka * (x - self.a), self.base.dphi, lambda x: sb + kb * (x - self.b)
        )

    def d2phi(self, t):
        (_, _, ka), (_, _, kb) = self._ends
        return self._pick(t, lambda x: np.full_like(x, ka), self.base.d2phi, lambda x: np.full_like(x, kb))

    def critical_point(self):
        (_, sa, ka), (_, sb, kb) = self._ends
        if min(sa, sb) <= 0.0 <= max(sa, sb):
            return self.base.critical_point()
        # phi' is monotone, so the zero lies on the side whose end slope points at it.
        left = self.a - sa / ka
        right = self.b - sb / kb
        return left if left < self.a else right

    def dphi_inv(self, s, a, b):
        (_, sa, ka), (_, sb, kb) = self._ends
        s = np.asarray(s, dtype=float)
        lo_s, hi_s = min(sa, sb), max(sa, sb)
        inner = self.base.dphi_inv(np.clip(s, lo_s, hi_s), self.a, self.b)
        below_a = (s - sa) * np.sign(sb - sa) < 0
        above_b = (s - sb) * np.sign(sb - sa) > 0
        return np.where(below_a, self.a + (s - sa) / ka, np.where(above_b, self.b + (s - sb) / kb, inner))

    def curvature_bounds(self, a, b):
        return self.base.curvature_bounds(max(a, self.a), min(b, self.b))

    def describe(self):
        return {**self.base.describe(), "extended": (self.a, self.b)}


# ------------------------------------------------------------ parametric


class ParametricCurve:
    """u -> (x(u), y(u)) on [u0, u1] with first and second derivatives."""

    u0: float
    u1: float
    closed = False

    def xy(self, u):
        raise NotImplementedError

    def d1(self, u):
        raise NotImplementedError

    def d2(self, u):
        raise NotImplementedError

    def graph_profile(self, ua, ub, axis):
        return None

    def arclength(self, ua=None, ub=None):
        ua = self.u0 if ua is None else ua
        ub = self.u1 if ub is None else ub

        def speed(u):
            dx, dy = self.d1(u)
            return math.hypot(float(dx), float(dy))

        val, _ = integrate.quad(speed, ua, ub, limit=400)
        return val


@dataclass(frozen=True)
class Circle(ParametricCurve):
    R: float
    u0: float = 0.0
    u1: float = 2 * math.pi
    closed = True

    def xy(self, u):
        return self.R * np.cos(u), self.R * np.sin(u)

    def d1(self, u):
        return -self.R * np.sin(u), self.R * np.cos(u)

    def d2(self, u):
        return -self.R * np.cos(u), -self.R * np.sin(u)

    def graph_profile(self, ua, ub, axis):
        mid = 0.5 * (ua + ub)
        sign = np.sin(mid) if axis == "x" else np.cos(mid)
        return EllipticArc(self.R, self.R, 1 if sign > 0 else -1)


@dataclass(frozen=True)
class Ellipse(ParametricCurve):
    a: float
    b: float
    u0: float = 0.0
    u1: float = 2 * math.pi
    closed = True

    def xy(self, u):
        return self.a * np.cos(u), self.b * np.sin(u)

    def d1(self, u):
        return -self.a * np.sin(u), self.b * np.cos(u)

    def d2(self, u):
        return -self.a * np.cos(u), -self.b * np.sin(u)

    def graph_profile(self, ua, ub, axis):
        mid = 0.5 * (ua + ub)
        if axis == "x":
            return EllipticArc(self.a, self.b, 1 if np.sin(mid) > 0 else -1)
        return EllipticArc(self.b, self.a, 1 if np.cos(mid) > 0 else -1)


@dataclass(frozen=True)
class ParabolaCurve(ParametricCurve):
    c2: float
    c1: float
    c0: float
    u0: float
    u1: float

    def xy(self, u):
        u = np.asarray(u, dtype=float)
        return u, (self.c2 * u + self.c1) * u + self.c0

    def d1(self, u):
        u = np.asarray(u, dtype=float)
        return np.ones_like(u), 2 * self.c2 * u + self.c1

    def d2(self, u):
        u = np.asarray(u, dtype=float)
        return np.zeros_like(u), np.full_like(u, 2 * self.c2)

    def graph_profile(self, ua, ub, axis):
        return Parabola(self.c2, self.c1, self.c0) if axis == "x" else None


@dataclass(frozen=True)
class SegmentCurve(ParametricCurve):
    p0: tuple[float, float]
    p1: tuple[float, float]
    u0: float = 0.0
    u1: float = 1.0

    def xy(self, u):
        u = np.asarray(u, dtype=float)
        return self.p0[0] + u * (self.p1[0] - self.p0[0]), self.p0[1] + u * (self.p1[1] - self.p0[1])

    def d1(self, u):
        u = np.asarray(u, dtype=float)
        return np.full_like(u, self.p1[0] - self.p0[0]), np.full_like(u, self.p1[1] - self.p0[1])

    def d2(self, u):
        u = np.asarray(u, dtype=float)
        return np.zeros_like(u), np.zeros_like(u)

    def graph_profile(self, ua, ub, axis):
        (x0, y0), (x1, y1) = self.p0, self.p1
        if axis == "x":
            m = (y1 - y0) / (x1 - x0)
            return Segment(m, y0 - m * x0)
        m = (x1 - x0) / (y1 - y0)
        return Segment(m, x0 - m * y0)


@dataclass(frozen=True)
class LogSpiral(ParametricCurve):
    """(R e^{k u} cos u, R e^{k u} sin u), u in [u0, u1]."""

    R: float
    k: float
    u0: float
    u1: float

    def xy(self, u):
        r = self.R * np.exp(self.k * np.asarray(u, dtype=float))
        return r * np.cos(u), r * np.sin(u)

    def d1(self, u):
        r = self.R * np.exp(self.k * np.asarray(u, dtype=float))
        c, s = np.cos(u), np.sin(u)
        return r * (self.k * c - s), r * (self.k * s + c)

    def d2(self, u):
        r = self.R * np.exp(self.k * np.asarray(u, dtype=float))
        c, s = np.cos(u), np.sin(u)
        k2 = self.k * self.k
        return r * ((k2 - 1) * c - 2 * self.k * s), r * ((k2 - 1) * s + 2 * self.k * c)


class ParametricGraph(Profile):
    """Graph profile of a parametric sub-arc whose ``axis`` coordinate is monotone."""

    kind = "parametric"

    def __init__(self, curve: ParametricCurve, ua: float, ub: float, axis: str):
        self.curve, self.ua, self.ub, self.axis = curve, ua, ub, axis
        self._gi = 0 if axis == "x" else 1

    def _g(self, u):
        return self.curve.xy(u)[self._gi]

    def _h(self, u):
        return self.curve.xy(u)[1 - self._gi]

    def _u_of(self, t):
        return bisect_monotone(self._g, self.ua, self.ub, t)

    def _derivs(self, t):
        u = self._u_of(t)
        d1, d2 = self.curve.d1(u), self.curve.d2(u)
        return d1[self._gi], d1[1 - self._gi], d2[self._gi], d2[1 - self._gi]

    def phi(self, t):
        return self._h(self._u_of(t))

    def dphi(self, t):
        g1, h1, _, _ = self._derivs(t)
        return h1 / g1

    def d2phi(self, t):
        g1, h1, g2, h2 = self._derivs(t)
        return (g1 * h2 - h1 * g2) / g1**3

    def _slope_u(self, u):
        d1 = self.curve.d1(u)
        return d1[1 - self._gi] / d1[self._gi]

    @cached_property
    def _critical(self):
        h1 = lambda u: self.curve.d1(u)[1 - self._gi]
        fa, fb = float(h1(self.ua)), float(h1(self.ub))
        if fa == 0.0:
            return float(self._g(self.ua))
        if fb == 0.0:
            return float(self._g(self.ub))
        if fa * fb > 0:
            return None
        u = bisect_monotone(h1, self.ua, self.ub, 0.0)
        return float(self._g(u))

    def critical_point(self):
        return self._critical

    def dphi_inv(self, s, a=None, b=None):
        u = bisect_monotone(self._slope_u, self.ua, self.ub, s)
        return self._g(u)

    def preimage(self, p, q, u, v):
        # Solve in the curve parameter: one bisection instead of two nested ones.
        w = np.sort(self._u_of(np.array([p, q], dtype=float)))
        w_lo, w_hi, valid = monotone_preimage(self._h, float(w[0]), float(w[1]), u, v)
        g_lo, g_hi = self._g(w_lo), self._g(w_hi)
        return np.minimum(g_lo, g_hi), np.maximum(g_lo, g_hi), valid

    def arclength(self, a, b):
        ua, ub = sorted(float(v) for v in self._u_of(np.array([a, b])))
        return self.curve.arclength(ua, ub)

    def describe(self):
        return {"kind": self.kind, "curve": type(self.curve).__name__, "u": (self.ua, self.ub)}


# ----------------------------------------------------------------- pieces


@dataclass(frozen=True, eq=False)
class GraphPiece:
    axis: str
    a: float
    b: float
    profile: Profile
    lam: float
    slope_bound: float = 1.0

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ArgumentError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if not self.a <= self.b:
            raise ArgumentError(f"empty domain [{self.a}, {self.b}]")

    @classmethod
    def build(cls, axis, a, b, profile, slope_bound=1.0):
        if profile.degenerate or a == b:
            lam = math.inf
        else:
            kmin, kmax = profile.curvature_bounds(a, b)
            lam = math.inf if kmin == 0 else max(kmax, 1.0 / kmin)
        return cls(axis, float(a), float(b), profile, lam, slope_bound)

    @property
    def domain(self) -> tuple[float, float]:
        return self.a, self.b

    @property
    def degenerate(self) -> bool:
        return self.profile.degenerate or not math.isfinite(self.lam)

    def phi(self, t):
        return self.profile.phi(t)

    def dphi(self, t):
        return self.profile.dphi(t)

    def d2phi(self, t):
        return self.profile.d2phi(t)

    def value_range(self, lo=None, hi=None):
        lo = self.a if lo is None else lo
        hi = self.b if hi is None else hi
        return self.profile.value_range(lo, hi)

    def arclength(self) -> float:
        return self.profile.arclength(self.a, self.b)

    def points(self, t):
        """World coordinates of the piece at graph parameters t."""
        t = np.asarray(t, dtype=float)
        v = self.profile.phi(t)
        return (t, v) if self.axis == "x" else (v, t)

    def bbox(self):
        m, M = (float(v) for v in self.value_range())
        if self.axis == "x":
            return self.a, self.b, m, M
        return m, M, self.a, self.b

    def transposed(self) -> "GraphPiece":
        return replace(self, axis="y" if self.axis == "x" else "x")

    def as_over_x(self) -> "GraphPiece":
        return self if self.axis == "x" else self.transposed()

    def translated(self, v) -> "GraphPiece":
        dt, dv = (v[0], v[1]) if self.axis == "x" else (v[1], v[0])
        return replace(self, a=self.a + dt, b=self.b + dt, profile=Shifted(self.profile, dt, dv))

    def slope_range(self):
        s = np.sort([float(self.dphi(self.a)), float(self.dphi(self.b))])
        return float(s[0]), float(s[1])

    def check_invariants(self, samples: int = 1000, tol: float = 1e-9) -> None:
        t = np.linspace(self.a, self.b, samples)
        slopes = self.dphi(t)
        if np.max(np.abs(slopes)) > self.slope_bound + tol:
            raise UnsupportedCurveError(f"|phi'| exceeds {self.slope_bound}")
        if self.degenerate:
            return
        k = self.d2phi(t)
        if not (np.all(k > 0) or np.all(k < 0)):
            raise UnsupportedCurveError("phi'' changes sign")
        ak = np.abs(k)
        if ak.min() < (1 - tol) / self.lam or ak.max() > self.lam * (1 + tol):
            raise UnsupportedCurveError("|phi''| outside [1/lambda, lambda]")

    def __repr__(self):
        return f"GraphPiece(axis={self.axis!r}, domain=[{self.a:.6g}, {self.b:.6g}], {self.profile.describe()}, lam={self.lam:.4g})"


@dataclass(frozen=True)
class CurveSpec:
    pieces: tuple[GraphPiece, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ArgumentError("a curve needs at least one piece")

    @cached_property
    def length(self) -> float:
        return sum(p.arclength() for p in self.pieces)

    @property
    def axes(self) -> set[str]:
        return {p.axis for p in self.pieces}

    def bbox(self):
        boxes = np.array([p.bbox() for p in self.pieces])
        return boxes[:, 0].min(), boxes[:, 1].max(), boxes[:, 2].min(), boxes[:, 3].max()

    def transposed(self) -> "CurveSpec":
        return CurveSpec(tuple(p.transposed() for p in self.pieces), self.name + "^T")

    def translated(self, v) -> "CurveSpec":
        return CurveSpec(tuple(p.translated(v) for p in self.pieces), self.name)

    def sample(self, per_piece: int = 1000):
        xs, ys = [], []
        for p in self.pieces:
            x, y = p.points(np.linspace(p.a, p.b, per_piece))
            xs.append(np.atleast_1d(x))
            ys.append(np.atleast_1d(y))
        return np.concatenate(xs), np.concatenate(ys)


# ------------------------------------------------------------- decompose


def _tangent_angle(curve, u):
    dx, dy = curve.d1(u)
    return np.arctan2(dy, dx)


def _curvature_sign(curve, u):
    (dx, dy), (ddx, ddy) = curve.d1(u), curve.d2(u)
    return dx * ddy - dy * ddx


def _bisect_scalar(f, lo, hi, tol=1e-12):
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def decompose(curve: ParametricCurve, samples: int = 4096, tol: float = 1e-12) -> CurveSpec:
    """Split a parametric curve into graph pieces.

    Splits happen where the tangent direction crosses pi/4 or 3pi/4 (mod pi)
    and where the signed curvature changes sign; each piece is a graph over x
    or over y accordingly.
    """
    u = np.linspace(curve.u0, curve.u1, samples + 1)
    dx, dy = curve.d1(u)
    speed = np.hypot(dx, dy)
    stalled = speed <= 1e-14 * max(1.0, float(speed.max()))
    if np.any(stalled[1:] & stalled[:-1]):
        raise UnsupportedCurveError("tangent undefined on an interval")

    psi = np.unwrap(np.arctan2(dy, dx))
    band = np.floor((psi - math.pi / 4) / (math.pi / 2))
    splits = []
    for i in np.flatnonzero(band[1:] != band[:-1]):
        ref = psi[i]
        for j in range(int(min(band[i], band[i + 1])) + 1, int(max(band[i], band[i + 1])) + 1):
            bound = math.pi / 4 + j * math.pi / 2

            def g(v, ref=ref, bound=bound):
                raw = float(_tangent_angle(curve, v))
                return raw + 2 * math.pi * round((ref - raw) / (2 * math.pi)) - bound

            splits.append(_bisect_scalar(g, u[i], u[i + 1], tol))

    kappa = _curvature_sign(curve, u)
    scale = float(np.abs(kappa).max())
    nonflat = np.abs(kappa) > 1e-12 * max(scale, 1e-300)
    ks = np.where(nonflat, np.sign(kappa), 0.0)
    for i in range(len(u) - 1):
        if ks[i] * ks[i + 1] < 0:
            splits.append(_bisect_scalar(lambda v: float(_curvature_sign(curve, v)), u[i], u[i + 1], tol))

    splits = sorted(s for s in splits if curve.u0 + tol < s < curve.u1 - tol)
    merged = []
    for s in splits:
        if not merged or s - merged[-1] > tol:
            merged.append(s)

    if curve.closed and merged:
        period = curve.u1 - curve.u0
        cuts = merged + [merged[0] + period]
        ranges = list(zip(cuts[:-1], cuts[1:]))
    else:
        cuts = [curve.u0] + merged + [curve.u1]
        ranges = list(zip(cuts[:-1], cuts[1:]))

    pieces = []
    for ua, ub in ranges:
        if ub - ua <= tol:
            continue
        mid = 0.5 * (ua + ub)
        mdx, mdy = (float(v) for v in curve.d1(mid))
        axis = "x" if abs(mdx) >= abs(mdy) else "y"
        gi = 0 if axis == "x" else 1
        ga, gb = float(curve.xy(ua)[gi]), float(curve.xy(ub)[gi])
        profile = curve.graph_profile(ua, ub, axis)
        if profile is None:
            profile = ParametricGraph(curve, ua, ub, axis)
        flat = not np.any(np.abs(_curvature_sign(curve, np.linspace(ua, ub, 33))) > 1e-12 * max(scale, 1e-300))
        if flat and not profile.degenerate:
            profile = _flat_profile(curve, ua, ub, axis)
        pieces.append(GraphPiece.build(axis, min(ga, gb), max(ga, gb), profile))
    return CurveSpec(tuple(pieces), type(curve).__name__)


def _flat_profile(curve, ua, ub, axis):
    (x0, y0), (x1, y1) = ((float(c) for c in curve.xy(v)) for v in (ua, ub))
    return SegmentCurve((x0, y0), (x1, y1)).graph_profile(0, 1, axis)


# ------------------------------------------------------------- builtins


def halfcircle(R: float = 2.0, sign: int = -1) -> CurveSpec:
    """The arc phi(t) = sign*sqrt(R^2 - t^2), |t| <= R/sqrt(2): one piece over x."""
    h = R / math.sqrt(2.0)
    piece = GraphPiece.build("x", -h, h, EllipticArc(R, R, sign))
    return CurveSpec((piece,), f"halfcircle:R={R:g},sign={'+' if sign > 0 else '-'}")


def full_circle(R: float = 1.0) -> CurveSpec:
    h = R / math.sqrt(2.0)
    pieces = [GraphPiece.build(axis, -h, h, EllipticArc(R, R, s)) for axis in ("x", "y") for s in (-1, 1)]
    return CurveSpec(tuple(pieces), f"circle:R={R:g}")


def ellipse(a: float, b: float) -> CurveSpec:
    """Four pieces split where the tangent slope is +-1."""
    tx = a * a / math.hypot(a, b)
    ty = b * b / math.hypot(a, b)
    pieces = [GraphPiece.build("x", -tx, tx, EllipticArc(a, b, s)) for s in (-1, 1)]
    pieces += [GraphPiece.build("y", -ty, ty, EllipticArc(b, a, s)) for s in (-1, 1)]
    return CurveSpec(tuple(pieces), f"ellipse:a={a:g},b={b:g}")


def segment(slope: float, length: float) -> CurveSpec:
    """Segment of the given slope and length centred at the origin."""
    half = 0.5 * length / math.hypot(1.0, slope)
    if abs(slope) <= 1.0:
        piece = GraphPiece.build("x", -half, half, Segment(slope, 0.0))
    else:
        hy = abs(slope) * half
        piece = GraphPiece.build("y", -hy, hy, Segment(1.0 / slope, 0.0))
    return CurveSpec((piece,), f"segment:slope={slope:g},len={length:g}")


def vsegment(length: float = 1.0) -> CurveSpec:
    """{(0, t) : 0 <= t <= length}."""
    return CurveSpec((GraphPiece.build("y", 0.0, length, Segment(0.0, 0.0)),), f"vsegment:len={length:g}")


def point() -> CurveSpec:
    return CurveSpec((GraphPiece.build("x", 0.0, 0.0, Segment(0.0, 0.0)),), "point")


def parabola(c2: float, t0: float, t1: float, c1: float = 0.0, c0: float = 0.0) -> CurveSpec:
    spec = decompose(ParabolaCurve(c2, c1, c0, t0, t1))
    return replace(spec, name=f"parabola:c2={c2:g},c1={c1:g},c0={c0:g},t0={t0:g},t1={t1:g}")


def logspiral(R: float = 1.0, k: float = 0.1, turns: float = 2.0) -> CurveSpec:
    """Logarithmic spiral on u in [2 pi, 2 pi (1 + turns)]."""
    spec = decompose(LogSpiral(R, k, 2 * math.pi, 2 * math.pi * (1 + turns)))
    return replace(spec, name=f"logspiral:R={R:g},k={k:g},turns={turns:g}")


CURVE_GRAMMAR = (
    "curve specs: circle:R=2 | halfcircle:R=2,sign=- | ellipse:a=2,b=1 | "
    "parabola:c2=1,t0=-1,t1=1[,c1=0,c0=0] | segment:slope=0.5,len=2 | "
    "vsegment:len=1 | logspiral:R=1,k=0.1,turns=2 | point"
)

_BUILDERS = {
    "circle": (lambda R=1.0: full_circle(R), {"R"}),
    "halfcircle": (lambda R=2.0, sign=-1: halfcircle(R, sign), {"R", "sign"}),
    "ellipse": (lambda a=2.0, b=1.0: ellipse(a, b), {"a", "b"}),
    "parabola": (lambda c2=1.0, t0=-1.0, t1=1.0, c1=0.0, c0=0.0: parabola(c2, t0, t1, c1, c0), {"c2", "t0", "t1", "c1", "c0"}),
    "segment": (lambda slope=0.5, len=2.0: segment(slope, len), {"slope", "len"}),
    "vsegment": (lambda len=1.0: vsegment(len), {"len"}),
    "logspiral": (lambda R=1.0, k=0.1, turns=2.0: logspiral(R, k, turns), {"R", "k", "turns"}),
    "point": (lambda: point(), set()),
}


def parse_curve(text: str) -> CurveSpec:
    m = re.fullmatch(r"\s*([a-z]+)\s*(?::(.*))?", text or "")
    if not m or m.group(1) not in _BUILDERS:
        raise CurveSpecError(f"unknown curve {text!r}; {CURVE_GRAMMAR}")
    name, body = m.group(1), m.group(2)
    builder, allowed = _BUILDERS[name]
    kwargs = {}
    for item in filter(None, (s.strip() for s in (body or "").split(","))):
        key, eq, val = item.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or key not in allowed:
            raise CurveSpecError(f"bad parameter {item!r} for {name}; {CURVE_GRAMMAR}")
        if key == "sign":
            if val not in ("+", "-", "1", "-1", "+1"):
                raise CurveSpecError(f"sign must be + or -, got {val!r}; {CURVE_GRAMMAR}")
            kwargs[key] = -1 if val.startswith("-") else 1
            continue
        try:
            kwargs[key] = float(val)
        except ValueError:
            raise CurveSpecError(f"non-numeric value in {item!r}; {CURVE_GRAMMAR}") from None
    try:
        return builder(**kwargs)
    except (ZeroDivisionError, ValueError) as exc:
        raise CurveSpecError(f"invalid parameters for {name}: {exc}") from None


def builtin_curves() -> dict[str, CurveSpec]:
    specs = [
        "circle:R=2",
        "halfcircle:R=2,sign=-",
        "halfcircle:R=2,sign=+",
        "ellipse:a=2,b=1",
        "parabola:c2=1,t0=-1,t1=1",
        "segment:slope=0.5,len=2.236",
        "vsegment:len=1",
        "logspiral:R=1,k=0.1,turns=2",
    ]
    return {s: parse_curve(s) for s in specs}


# ----------------------------------------------------- pointwise projections


def _require_axis(piece: GraphPiece, axis: str):
    if piece.axis != axis:
        raise AxisMismatchError(f"piece is a graph over {piece.axis}, operation needs {axis}")


def _domain_param(piece: GraphPiece, t: float, u: float, shift: float):
    """t = u - shift clamped to [a, b], or None if outside beyond rounding of the subtraction."""
    slack = 4 * np.finfo(float).eps * max(abs(u), abs(shift), abs(piece.a), abs(piece.b), 1.0)
    if not piece.a - slack <= t <= piece.b + slack:
        return None
    return min(max(t, piece.a), piece.b)


def phi_alpha_point(piece: GraphPiece, alpha: float, p) -> IntervalSet:
    """{p2 - phi(p1 - alpha)} if p1 - alpha lies in the domain, else empty."""
    _require_axis(piece, "x")
    t = _domain_param(piece, p[0] - alpha, p[0], alpha)
    if t is None:
        return IntervalSet()
    v = float(p[1] - piece.phi(t))
    return IntervalSet([v], [v])


def psi_beta_point(piece: GraphPiece, beta: float, p) -> IntervalSet:
    _require_axis(piece, "y")
    t = _domain_param(piece, p[1] - beta, p[1], beta)
    if t is None:
        return IntervalSet()
    v = float(p[0] - piece.phi(t))
    return IntervalSet([v], [v])


# ------------------------------------------------------ tangent-angle maps


def tangent_angle_map(piece: GraphPiece, z0, alpha: float) -> float:
    """theta in (-pi/2, pi/2] orthogonal to the tangent slope phi'(z0_1 - alpha)."""
    _require_axis(piece, "x")
    t = z0[0] - alpha
    if not piece.a <= t <= piece.b:
        raise OutOfDomainError(f"z0_1 - alpha = {t} outside [{piece.a}, {piece.b}]")
    s = float(piece.dphi(t))
    return math.pi / 2 if s == 0.0 else math.atan(-1.0 / s)


def _slope_of_theta(theta):
    return -math.cos(theta) / math.sin(theta) if math.sin(theta) != 0 else math.inf


def alpha_of_theta(piece: GraphPiece, z0, theta: float) -> float:
    """Inverse of ``tangent_angle_map``: z0_1 - (phi')^{-1}(-cot theta)."""
    _require_axis(piece, "x")
    if piece.degenerate:
        raise CurvatureZeroError("phi' is not invertible on a flat piece")
    s = _slope_of_theta(theta)
    lo, hi = piece.slope_range()
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not lo - slack <= s <= hi + slack:
        raise OutOfDomainError(f"slope {s} outside phi' range [{lo}, {hi}]")
    t = float(piece.profile.dphi_inv(min(max(s, lo), hi), piece.a, piece.b))
    return z0[0] - t


def dalpha_dtheta(piece: GraphPiece, z0, theta: float) -> float:
    """-(1 + phi'^2) / phi'' at t = z0_1 - alpha(theta)."""
    if piece.degenerate:
        raise CurvatureZeroError("zero curvature: d alpha / d theta undefined")
    t = z0[0] - alpha_of_theta(piece, z0, theta)
    s = float(piece.dphi(t))
    k = float(piece.d2phi(t))
    if k == 0.0:
        raise CurvatureZeroError(f"phi''({t}) = 0")
    return -(1.0 + s * s) / k


def parabolic_extension(piece: GraphPiece, pad: float) -> GraphPiece:
    """Extend the domain by ``pad`` on both sides with quadratic Taylor continuations.

    The returned piece records the slope bound it actually achieves in
    ``slope_bound`` (at most 1 + lambda * pad for an admissible piece).
    """
    if pad < 0:
        raise ArgumentError("pad must be non-negative")
    if pad == 0:
        return piece
    if piece.degenerate:
        raise CurvatureZeroError("cannot extend a zero-curvature piece")
    profile = ParabolicExtension(piece.profile, piece.a, piece.b)
    for x in (piece.a, piece.b):
        if not math.isfinite(float(piece.d2phi(x))):
            raise ArgumentError(f"phi'' undefined at endpoint {x}")
    a, b = piece.a - pad, piece.b + pad
    bound = max(abs(float(profile.dphi(a))), abs(float(profile.dphi(b))), piece.slope_bound)
    return GraphPiece(piece.axis, a, b, profile, piece.lam, bound)
