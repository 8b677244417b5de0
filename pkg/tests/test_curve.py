import math

import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from favard.curve import (
    Circle,
    Ellipse,
    EllipticArc,
    GraphPiece,
    LogSpiral,
    Parabola,
    ParabolaCurve,
    ParametricCurve,
    alpha_of_theta,
    builtin_curves,
    dalpha_dtheta,
    decompose,
    ellipse,
    halfcircle,
    parabolic_extension,
    parse_curve,
    phi_alpha_point,
    psi_beta_point,
    segment,
    tangent_angle_map,
)
from favard.errors import (
    AxisMismatchError,
    CurvatureZeroError,
    CurveSpecError,
    OutOfDomainError,
    UnsupportedCurveError,
)

R = 2.0
LOWER = halfcircle(R, -1).pieces[0]
SQ2 = math.sqrt(2.0)


def nondegenerate_pieces():
    return [
        (name, p)
        for name, c in builtin_curves().items()
        for p in c.pieces
        if not p.degenerate
    ]


def test_circle_decomposes_into_four_graphs():
    spec = decompose(Circle(R))
    assert len(spec.pieces) == 4
    assert sorted(p.axis for p in spec.pieces) == ["x", "x", "y", "y"]
    for p in spec.pieces:
        assert p.a == pytest.approx(-R / SQ2, abs=1e-9)
        assert p.b == pytest.approx(R / SQ2, abs=1e-9)
        t = np.linspace(p.a, p.b, 7)
        assert np.allclose(np.abs(p.phi(t)), np.sqrt(R * R - t * t))
    signs = sorted(p.profile.sign for p in spec.pieces if p.axis == "x")
    assert signs == [-1, 1]


def test_ellipse_split_at_unit_slope():
    a, b = 2.0, 1.0
    spec = decompose(Ellipse(a, b))
    tx = a * a / math.hypot(a, b)
    ty = b * b / math.hypot(a, b)
    for p in spec.pieces:
        expect = tx if p.axis == "x" else ty
        assert p.b == pytest.approx(expect, abs=1e-9)
        assert abs(float(p.dphi(p.b))) == pytest.approx(1.0, abs=1e-8)
    builtin = ellipse(a, b)
    assert sorted(round(p.b, 9) for p in builtin.pieces) == sorted(round(p.b, 9) for p in spec.pieces)


def test_slope_half_segment_is_one_degenerate_piece():
    spec = segment(0.5, math.sqrt(5))
    (p,) = spec.pieces
    assert p.axis == "x" and p.degenerate
    assert spec.bbox() == pytest.approx((-1, 1, -0.5, 0.5))
    assert spec.length == pytest.approx(math.sqrt(5))


@pytest.mark.parametrize(
    "curve",
    [Circle(R), Ellipse(2.0, 1.0), ParabolaCurve(1.0, 0.0, 0.0, -1.0, 1.0), LogSpiral(1.0, 0.1, 2 * math.pi, 6 * math.pi)],
    ids=["circle", "ellipse", "parabola", "logspiral"],
)
def test_decompose_preserves_arclength(curve):
    spec = decompose(curve)
    assert spec.length == pytest.approx(curve.arclength(), abs=1e-9)


@pytest.mark.parametrize("name,piece", nondegenerate_pieces(), ids=lambda v: v if isinstance(v, str) else "")
def test_piece_invariants(name, piece):
    piece.check_invariants()
    t = np.linspace(piece.a, piece.b, 2000)
    assert np.all(np.diff(piece.dphi(t)) > 0) or np.all(np.diff(piece.dphi(t)) < 0)


def test_halfcircle_lambda():
    # |phi''| runs from 1/R at the apex to sqrt(8)/R at the ends.
    kmin, kmax = LOWER.profile.curvature_bounds(LOWER.a, LOWER.b)
    assert kmin == pytest.approx(1 / R)
    assert kmax == pytest.approx(math.sqrt(8) / R)
    assert LOWER.lam == pytest.approx(2.0)


class _Stalled(ParametricCurve):
    u0, u1 = 0.0, 1.0

    def xy(self, u):
        u = np.asarray(u, dtype=float)
        return np.zeros_like(u), np.zeros_like(u)

    def d1(self, u):
        return self.xy(u)

    def d2(self, u):
        return self.xy(u)


def test_stalled_curve_rejected():
    with pytest.raises(UnsupportedCurveError):
        decompose(_Stalled())


# --------------------------------------------------------------- Φ_α, Ψ_β


def test_phi_alpha_point_examples():
    assert phi_alpha_point(LOWER, 0.0, (0.0, 0.0)).intervals == [(2.0, 2.0)]
    assert not phi_alpha_point(LOWER, 5.0, (0.0, 0.0))
    par = GraphPiece.build("x", 0.0, 1.0, Parabola(1.0))
    assert phi_alpha_point(par, 0.5, (1.0, 1.0)).intervals == [(0.75, 0.75)]


def test_psi_beta_point_examples():
    right = GraphPiece.build("y", -R / SQ2, R / SQ2, EllipticArc(R, R, 1))
    assert psi_beta_point(right, 0.0, (0.0, 0.0)).intervals == [(-2.0, -2.0)]
    assert not psi_beta_point(right, 5.0, (0.0, 0.0))
    par = GraphPiece.build("y", 0.0, 1.0, Parabola(1.0))
    assert psi_beta_point(par, 0.5, (1.0, 1.0)).intervals == [(0.75, 0.75)]


def test_axis_mismatch():
    with pytest.raises(AxisMismatchError):
        phi_alpha_point(LOWER.transposed(), 0.0, (0, 0))
    with pytest.raises(AxisMismatchError):
        psi_beta_point(LOWER, 0.0, (0, 0))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1))
@example(-1.9734314560457997, 0.0, 0.0)  # endpoint lost to rounding
def test_inverse_set_identity(alpha, beta, s):
    t = LOWER.a + s * (LOWER.b - LOWER.a)
    p = (alpha + t, beta + float(LOWER.phi(t)))
    (got,) = phi_alpha_point(LOWER, alpha, p).intervals
    assert got[0] == pytest.approx(beta, abs=1e-12)


# ------------------------------------------------------ tangent-angle maps


def test_tangent_angle_flat_point():
    assert tangent_angle_map(LOWER, (0.0, 0.0), 0.0) == pytest.approx(math.pi / 2)


def test_tangent_angle_slope_minus_one():
    par = GraphPiece.build("x", -1.0, 1.0, Parabola(0.5))
    assert tangent_angle_map(par, (-1.0, 0.0), 0.0) == pytest.approx(math.pi / 4)


def test_tangent_angle_out_of_domain():
    with pytest.raises(OutOfDomainError):
        tangent_angle_map(LOWER, (0.0, 0.0), 3.0)


def test_round_trip_random_angles():
    rng = np.random.default_rng(1)
    z0 = (0.3, 0.1)
    # φ' covers [-1, 1] on the lower arc, so θ covers [π/4, 3π/4].
    for theta in rng.uniform(math.pi / 4 + 1e-9, 3 * math.pi / 4 - 1e-9, 100):
        alpha = alpha_of_theta(LOWER, z0, theta)
        back = tangent_angle_map(LOWER, z0, alpha) % math.pi
        assert back == pytest.approx(theta, abs=1e-10)


def test_dalpha_dtheta_apex():
    assert dalpha_dtheta(LOWER, (0.0, 0.0), math.pi / 2) == pytest.approx(-R)


def test_dalpha_dtheta_rejects_segment():
    with pytest.raises(CurvatureZeroError):
        dalpha_dtheta(segment(0.5, 2).pieces[0], (0, 0), 1.0)


@pytest.mark.parametrize("name,piece", nondegenerate_pieces(), ids=lambda v: v if isinstance(v, str) else "")
def test_dalpha_dtheta_bound_and_finite_difference(name, piece):
    piece = piece.as_over_x()
    lo, hi = piece.slope_range()
    th = np.sort([math.atan2(1.0, -s) for s in (lo, hi)])
    rng = np.random.default_rng(2)
    z0 = (0.2, 0.0)
    h = 1e-5
    for theta in rng.uniform(th[0] + 10 * h, th[1] - 10 * h, 20):
        d = dalpha_dtheta(piece, z0, theta)
        assert abs(d) <= 2 * piece.lam * (1 + 1e-9)
        fd = (alpha_of_theta(piece, z0, theta + h) - alpha_of_theta(piece, z0, theta - h)) / (2 * h)
        assert fd == pytest.approx(d, rel=1e-6)


# ------------------------------------------------------ parabolic extension


def test_extension_zero_pad_is_identity():
    assert parabolic_extension(LOWER, 0.0) is LOWER


def test_extension_is_c1_at_junctions():
    ext = parabolic_extension(LOWER, 0.1)
    prof = ext.profile
    for x in (LOWER.a, LOWER.b):
        inner_v, inner_s = float(LOWER.phi(x)), float(LOWER.dphi(x))
        side = prof.left if x == LOWER.a else prof.right
        eps = 1e-7
        assert float(side(x)) == pytest.approx(inner_v, abs=1e-12)
        slope = (float(side(x + eps)) - float(side(x - eps))) / (2 * eps)
        assert float(prof.dphi(x)) == pytest.approx(inner_s, abs=1e-12)
        assert slope == pytest.approx(inner_s, abs=1e-6)
        assert float(prof.dphi(x - 1e-13)) == pytest.approx(float(prof.dphi(x + 1e-13)), abs=1e-11)


def test_extension_slope_bound():
    pad = 0.1
    ext = parabolic_extension(LOWER, pad)
    t = np.linspace(ext.a, ext.b, 1000)
    assert np.max(np.abs(ext.dphi(t))) <= 1 + LOWER.lam * pad
    assert ext.slope_bound <= 1 + LOWER.lam * pad
    assert np.all(np.diff(ext.dphi(t)) > 0)


def test_extension_rejects_segment():
    with pytest.raises(CurvatureZeroError):
        parabolic_extension(segment(0.5, 2).pieces[0], 0.1)


# ---------------------------------------------------------- mini-language


@pytest.mark.parametrize(
    "text,count",
    [
        ("circle:R=2", 4),
        ("halfcircle:R=2,sign=-", 1),
        ("ellipse:a=2,b=1", 4),
        ("parabola:c2=1,t0=-1,t1=1", 3),
        ("segment:slope=0.5,len=2", 1),
        ("vsegment:len=1", 1),
        ("point", 1),
    ],
)
def test_parse_curve(text, count):
    assert len(parse_curve(text).pieces) == count


def test_parse_logspiral():
    spec = parse_curve("logspiral:R=1,k=0.1,turns=2")
    assert len(spec.pieces) >= 8
    assert all(abs(float(p.dphi(p.a))) <= 1 + 1e-8 for p in spec.pieces)


@pytest.mark.parametrize("text", ["cycloid:r=1", "circle:Q=2", "circle:R=abc", "halfcircle:sign=x", ""])
def test_parse_curve_errors_name_grammar(text):
    with pytest.raises(CurveSpecError, match="curve specs"):
        parse_curve(text)


def test_translation_moves_points():
    moved = LOWER.translated((0.25, -0.5))
    t = np.linspace(LOWER.a, LOWER.b, 9)
    x, y = moved.points(t + 0.25)
    x0, y0 = LOWER.points(t)
    assert np.allclose(x, x0 + 0.25) and np.allclose(y, y0 - 0.5)
