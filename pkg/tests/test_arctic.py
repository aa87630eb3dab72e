import math
from fractions import Fraction

import numpy as np
import pytest

from tacnode import arctic as G
from tacnode.errors import InvalidParameterError, PoleProximityError

FIG_A = (2, 8, 1 / 3, 1 / 4)
FIG_B = (8, 2, 1 / 3, 1 / 4)


def test_coords_example():
    assert G.coords_transform(0, 0) == (0.5, -0.5)


def test_coords_roundtrip():
    for n in range(-4, 5):
        for x in range(-4, 5):
            eta, xi = G.coords_transform(n, x)
            assert G.coords_inverse(eta, xi) == (n, x)
            assert eta + xi == 2 * n


def test_blue_dot_parity():
    # (eta, xi) = (k, 2l - k - 1) maps to integer (n, x) with eta + xi odd
    for k in range(-3, 4):
        for ell in range(-3, 4):
            eta, xi = k, 2 * ell - k - 1
            n, x = G.coords_inverse(eta, xi)
            assert (eta + xi) % 2 == 1
            assert G.coords_transform(n, x) == (eta, xi)


def test_geometry_example():
    h = G.geometry_from_scaling(G.GeometryScaling(gamma=2.0, d=100.0), r=5)
    assert (h.b, h.c, h.m1, h.m2, h.n1, h.n2) == (105, 200, 300, 300, 295, 305)
    assert h.rho == 0 and h.r == 5
    assert h.sigma == h.b + h.c - 2 * h.d
    assert not h.violations()


def test_geometry_random_draws():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = G.GeometryScaling(gamma=rng.uniform(1.05, 2.95), d=rng.uniform(50, 500),
                              beta1=-rng.uniform(0, 2), beta2=rng.normal(),
                              gamma1=rng.normal(), gamma2=rng.normal())
        r, rho = int(rng.integers(0, 20)), int(rng.integers(0, 5))
        h = G.geometry_from_scaling(g, r, rho)
        assert abs(h.m1 + h.m2 - h.n1 - h.n2) < 1e-9 * max(1, h.m1 + h.m2)
        assert abs(h.rho - rho) < 1e-9 * max(1, h.m1)
        assert abs(h.r - r) < 1e-9 * max(1, h.b)
        assert abs(h.sigma - (h.m1 - h.n1 + h.c - h.d)) < 1e-9 * max(1, h.c)
        assert abs(g.beta + g.beta1 + g.beta2) < 1e-14


def test_geometry_negative_side():
    g = G.GeometryScaling(gamma=2.0, d=2.0, beta1=-3.0)
    with pytest.raises(InvalidParameterError, match="nonnegative"):
        G.geometry_from_scaling(g, r=1)


def test_geometry_a_constant():
    assert G.GeometryScaling(2.0, 10.0).a == pytest.approx(2 * math.sqrt(2))


@pytest.mark.parametrize("kw", [dict(gamma=1.0, d=10.0), dict(gamma=3.0, d=10.0),
                                dict(gamma=2.0, d=0.5)])
def test_geometry_errors(kw):
    with pytest.raises(InvalidParameterError):
        G.geometry_from_scaling(G.GeometryScaling(**kw), r=2)


def test_geometry_violation_listed():
    h = G.HexGeometry(b=1, c=5, d=2, n1=3, n2=3, m1=3, m2=4)
    bad = h.violations()
    assert any("tilability" in v for v in bad) and any("b >= d" in v for v in bad)
    with pytest.raises(InvalidParameterError, match="tilability"):
        h.validate()


def test_cuts_fig_a():
    c = G.cuts_from_hexagon(*FIG_A)
    assert c.a[2] == pytest.approx(8 + 1 / 3) and c.b[2] == pytest.approx(8.75)
    assert c.b[2] - c.a[2] == pytest.approx(5 / 12)
    assert sum(c.lengths) == pytest.approx(1, abs=1e-14)
    assert c.a[1] == 0 and c.b[1] - c.a[1] == pytest.approx(1 / 3)


@pytest.mark.parametrize("args", [(2, 8, 0.5, 0.6), (2, 8, 0.0, 0.2), (-0.1, 8, 0.3, 0.3)])
def test_cuts_invalid(args):
    with pytest.raises(InvalidParameterError):
        G.cuts_from_hexagon(*args)


def test_cuts_from_geometry_normalizes():
    h = G.HexGeometry(b=30, c=90, d=20, n1=60, n2=240, m1=150, m2=150)
    c = G.cuts_from_geometry(h)
    assert sum(c.lengths) == pytest.approx(1)
    assert c.b[1] == pytest.approx(20 / 120)


def test_classify_figures():
    assert G.classify_cusp(*FIG_A) == "vertical_cusp"
    assert G.classify_cusp(*FIG_B) == "oblique_cusp"


def test_classify_arithmetic():
    n1, n2, d, b = (Fraction(x) for x in (2, 8, Fraction(1, 3), Fraction(1, 4)))
    cp = 1 - b - d
    assert n2 * b - n1 * cp == Fraction(7, 6) and d * cp == Fraction(5, 36)
    n1, n2 = n2, n1
    assert n2 * b - n1 * cp == Fraction(-17, 6) and -d * b == Fraction(-1, 12)


def test_classify_boundary_is_none():
    # choose n2 so that n2 b - n1 c' = d c' exactly (all dyadic, exact in floats)
    d, b, n1 = 0.25, 0.25, 1.0
    cp = 1 - b - d
    n2 = (d * cp + n1 * cp) / b
    assert n2 * b - n1 * cp == d * cp
    assert G.classify_cusp(n1, n2, d, b) == "none"
    n2 = (-d * b + n1 * cp) / b
    assert G.classify_cusp(n1, n2, d, b) == "none"


@pytest.mark.parametrize("lam", [2, 7, 30])
def test_classify_homogeneous(lam):
    for h in (G.HexGeometry(b=3, c=9, d=4, n1=24, n2=96, m1=60, m2=60),
              G.HexGeometry(b=3, c=9, d=4, n1=96, n2=24, m1=60, m2=60)):
        hs = G.HexGeometry(*(lam * v for v in (h.b, h.c, h.d, h.n1, h.n2, h.m1, h.m2)))
        args = [(x.n1 / x.N, x.n2 / x.N, x.d / x.N, x.b / x.N) for x in (h, hs)]
        assert G.classify_cusp(*args[0]) == G.classify_cusp(*args[1]) != "none"


def test_classify_invalid():
    with pytest.raises(InvalidParameterError):
        G.classify_cusp(2, 8, 0.6, 0.5)


@pytest.mark.parametrize("geom", [FIG_A, FIG_B])
def test_tangent_slopes(geom):
    c = G.cuts_from_hexagon(*geom)
    for ai, bi in zip(c.a, c.b):
        for s in (1e-4, -1e-4):
            assert abs(G.arctic_point(ai + s, c)[2] + 1) < 1e-3
            assert abs(G.arctic_point(bi + s, c)[2]) > 1e2


def test_pole_error():
    c = G.cuts_from_hexagon(*FIG_A)
    with pytest.raises(PoleProximityError):
        G.arctic_point(c.b[1] + 1e-10, c)


def test_complex_parameter():
    c = G.cuts_from_hexagon(*FIG_A)
    x, y, s = G.arctic_point(0.5 + 0.0j, c)
    xr, yr, sr = G.arctic_point(0.5, c)
    assert abs(x - xr) < 1e-14 and abs(y - yr) < 1e-14 and isinstance(x, complex)


@pytest.mark.parametrize("geom", [FIG_A, FIG_B])
@pytest.mark.parametrize("i", [0, 1, 2])
def test_endpoint_limits(geom, i):
    c = G.cuts_from_hexagon(*geom)
    for which, w0 in (("b", c.b[i]), ("a", c.a[i])):
        x, y = G.endpoint_limit(c, i, which)
        for h in (1e-6, -1e-6):
            xp, yp, _ = G.arctic_point(w0 + h, c)
            assert abs(xp - x) < 1e-4 and abs(yp - y) < 1e-4


def test_tangency_gap_fig_a():
    c = G.cuts_from_hexagon(*FIG_A)
    _, y = G.endpoint_limit(c, 1, "b")
    assert abs(G.tangency_gap(*FIG_A) - (1 - c.b[1] - y)) < 1e-14
    assert abs(G.tangency_gap(*FIG_A) - 37 / 2121) < 1e-15


@pytest.mark.parametrize("geom", [FIG_A, FIG_B])
def test_oblique_gap(geom):
    c = G.cuts_from_hexagon(*geom)
    x, _ = G.endpoint_limit(c, 1, "a")
    assert abs(G.oblique_gap(*geom) - (x - c.a[1] - geom[2])) < 1e-14


def test_regime_heuristic():
    assert G.regime_heuristic(2.0, 5, 1) == "cusp_airy_side"
    assert G.regime_heuristic(2.0, 3, 1) == "transversal_side_undetermined"
    assert G.regime_heuristic(2.5, 50, 30) == "transversal_side_undetermined"
    with pytest.raises(InvalidParameterError):
        G.regime_heuristic(3.5, 5, 1)
    with pytest.raises(InvalidParameterError):
        G.regime_heuristic(2.0, 5, 0)


def test_sample_vertical_tangent_at_d():
    c = G.cuts_from_hexagon(*FIG_A)
    cv = G.sample_curve(c, -15, 20, 4001)
    # the slope changes sign across w = b2 through infinity, at x = b2 = d
    k = np.where(np.isfinite(cv.w) & (cv.w > c.b[1]))[0][0]
    j = k - 2  # skip the NaN separator
    assert np.sign(cv.slope[j]) != np.sign(cv.slope[k])
    assert abs(cv.x[k] - 1 / 3) < 0.01 and abs(cv.x[j] - 1 / 3) < 0.01


def test_sample_slope_near_a2():
    c = G.cuts_from_hexagon(*FIG_A)
    cv = G.sample_curve(c, -0.01, 0.01, 401)
    ok = np.isfinite(cv.w) & (np.abs(cv.w) < 2e-3) & (cv.w != 0)
    assert np.all(np.abs(cv.slope[ok] + 1) < 0.05)


def test_sample_within_strip():
    c = G.cuts_from_hexagon(*FIG_A)
    cv = G.sample_curve(c, -15, 20, 4001)
    ok = np.isfinite(cv.y)
    assert np.all((cv.y[ok] >= -1e-12) & (cv.y[ok] <= 1 + 1e-12))


def test_sample_nan_segments():
    c = G.cuts_from_hexagon(*FIG_A)
    cv = G.sample_curve(c, -15, 20, 4001)
    assert np.sum(np.isnan(cv.w)) == 6  # one separator per pole in range


def test_sample_invalid():
    c = G.cuts_from_hexagon(*FIG_A)
    with pytest.raises(InvalidParameterError):
        G.sample_curve(c, 1.0, 0.0)


def test_csv_and_svg():
    c = G.cuts_from_hexagon(*FIG_A)
    cv = G.sample_curve(c, -3, 10, 101)
    text = G.curve_to_csv(cv)
    lines = text.splitlines()
    assert lines[0] == "w,x,y,slope"
    assert len(lines) == 1 + cv.w.size
    assert "nan,nan,nan,nan" in lines
    svg = G.curve_to_svg(cv, c)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<line") == 3 and "<path" in svg
