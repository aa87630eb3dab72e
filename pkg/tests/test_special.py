import math

import mpmath
import numpy as np
import pytest
from scipy.special import eval_hermite

from tacnode import contours as C
from tacnode import special as S
from tacnode.errors import InvalidParameterError


# --- Hermite families -------------------------------------------------------

def test_probabilist_low_degrees():
    assert S.hermite("probabilist", 0, 1.7) == 1
    assert S.hermite("probabilist", 1, 1.7) == 1.7
    assert S.hermite("probabilist", 2, 3.0) == 8


@pytest.mark.parametrize("j", range(21))
def test_probabilist_scale_relation(j):
    x = np.linspace(-3, 3, 11)
    ref = 2 ** (-j / 2) * eval_hermite(j, x / math.sqrt(2))
    assert np.allclose(S.hermite("probabilist", j, x), ref, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("j", range(9))
def test_family_relations(j):
    x = np.array([-1.3, 0.2, 2.4])
    H = S.hermite("physicist", j, x)
    assert np.allclose(S.hermite("monic", j, x), 2.0 ** -j * H, rtol=1e-13)
    c = math.sqrt(math.factorial(j)) * math.pi ** 0.25 * 2 ** (-j / 2)
    assert np.allclose(S.hermite("orthonormal", j, x), 2.0 ** -j * H / c, rtol=1e-13)


def test_orthogonality():
    x, w = np.polynomial.hermite.hermgauss(30)
    H = np.array([S.hermite("physicist", j, x).real for j in range(9)])
    G = (H * w) @ H.T
    exact = np.diag([math.sqrt(math.pi) * 2 ** j * math.factorial(j) for j in range(9)])
    assert np.max(np.abs(G - exact) / np.sqrt(np.outer(np.diag(exact), np.diag(exact)))) < 1e-8


@pytest.mark.parametrize("j, x", [(200, 3.7), (150, -8.2), (60, 0.3)])
def test_high_degree_relative_accuracy(j, x):
    m, lg = S.hermite_scaled("physicist", j, x)
    ref = mpmath.hermite(j, x)
    val = mpmath.mpf(float(m.real)) * mpmath.exp(float(lg.real))
    assert abs(val / ref - 1) < 1e-12


def test_imaginary_argument_no_overflow():
    m, lg = S.hermite_scaled("physicist", 255, 23j)
    assert np.isfinite(m) and np.isfinite(lg)
    ref = mpmath.hermite(255, mpmath.mpc(0, 23))
    val = complex(m) * mpmath.exp(float(lg.real))
    assert abs(val / ref - 1) < 1e-10


def test_rodrigues():
    # H_j(x) = (-1)^j e^{x^2} d^j/dx^j e^{-x^2}, derivatives by Cauchy integral
    x0 = 0.4
    for j in range(7):
        th = 2 * math.pi * np.arange(64) / 64
        z = x0 + 0.5 * np.exp(1j * th)
        d = math.factorial(j) * np.mean(np.exp(-z * z) * np.exp(-1j * j * th)) / 0.5 ** j
        assert abs((-1) ** j * math.exp(x0 * x0) * d - S.hermite("physicist", j, x0)) < 1e-6


def test_generating_function():
    x = np.linspace(-3, 3, 7)[:, None]
    z = 0.9 * np.exp(1j * np.linspace(0, 2 * math.pi, 9))[None, :]
    s = sum(S.hermite("probabilist", j, x) * z ** j / math.factorial(j) for j in range(41))
    assert np.max(np.abs(s - np.exp(-z * z / 2 + x * z))) < 1e-12


def test_unknown_kind():
    with pytest.raises(InvalidParameterError):
        S.hermite("laguerre", 2, 0.0)


# --- f weight ---------------------------------------------------------------

def test_f_weight_origin():
    assert abs(S.f_weight(0, 0) - math.sqrt(2)) < 1e-15


def test_f_weight_symmetry():
    rng = np.random.default_rng(1)
    z = rng.normal(size=6) + 1j * rng.normal(size=6)
    u = rng.normal(size=6) + 1j * rng.normal(size=6)
    r2 = math.sqrt(2)
    assert np.allclose(S.f_weight(r2 * z, u), S.f_weight(r2 * u, z), rtol=1e-13)


@pytest.mark.parametrize("n", range(6))
def test_f_weight_derivatives(n):
    x, z = 0.3, 0.2 - 0.1j
    # (-d/dx)^n by a high-order Cauchy integral (analytic in x)
    th = 2 * math.pi * np.arange(64) / 64
    pts = x + 0.5 * np.exp(1j * th)
    d = math.factorial(n) * np.mean(S.f_weight(pts, z) * np.exp(-1j * n * th)) / 0.5 ** n
    lhs = (-1) ** n * d / S.f_weight(x, z)
    assert abs(lhs - S.hermite("probabilist", n, x - 2 * z)) < 1e-8
    assert abs(S.f_weight_deriv(n, x, z) - d) < 1e-8


# --- Phi --------------------------------------------------------------------

def _phi_direct(k, eta, sign):
    line = C.vertical_line(sign * 0.7, half_length=12.0)
    v, _ = C.integrate(lambda v: np.exp(v * v + 2 * eta * v) / v ** (k + 1) / (2j * math.pi), line)
    return v.real


def test_phi_values():
    assert abs(S.phi(0, 0.0) - 0.5) < 1e-15
    assert abs(S.phi(-1, 1.0) - math.exp(-1) / (2 * math.sqrt(math.pi))) < 1e-14
    assert abs(S.phi(-1, 1.0) - 0.103777) < 1e-6


@pytest.mark.parametrize("k", range(-2, 4))
@pytest.mark.parametrize("eta", [-1.0, 0.0, 2.0])
def test_phi_reflection(k, eta):
    assert abs(S.phi(k, eta, -1) - (-1) ** (k + 1) * S.phi(k, -eta, 1)) < 1e-12


@pytest.mark.parametrize("k", range(-3, 4))
@pytest.mark.parametrize("sign", [1, -1])
def test_phi_matches_line_quadrature(k, sign):
    for eta in (-0.8, 0.4):
        assert abs(S.phi(k, eta, sign) - _phi_direct(k, eta, sign)) < 1e-10


# --- truncated generating functions -----------------------------------------

@pytest.mark.parametrize("tau", [-3, -1, 0])
def test_F_vanishes(tau):
    v = np.array([0.3, 1 + 1j])
    assert np.all(S.gen_fn("F", tau, 0.4, v) == 0)


def test_F2():
    v = np.array([0.3, -1 + 2j])
    assert np.allclose(S.gen_fn("F", 2, 0.7, v), 1 - 0.7 * v)


@pytest.mark.parametrize("tau", range(-2, 13))
def test_F_plus_E(tau):
    v = np.array([0.3 + 0.2j, -1.1 + 0.5j, 0.8j])
    s = S.gen_fn("F", tau, -0.6, v) + S.gen_fn("E", tau, -0.6, v)
    assert np.max(np.abs(s - np.exp(-v * v / 2 + 0.6 * v))) < 1e-13


@pytest.mark.parametrize("tau", [1, 2, 3])
def test_F_contour_representation(tau):
    xi = 0.45
    for u in (2.0, 2j, -1.2 - 1.6j):
        val, _ = C.integrate(lambda w: np.exp(-w * w / 2 - xi * w) / (w ** tau * (u - w))
                             / (2j * math.pi), C.circle(0.5))
        assert abs(S.gen_fn("F", tau, xi, u) / u ** tau - val) < 1e-12


@pytest.mark.parametrize("tau", [1, 3, 5])
def test_theta_scale_variant(tau):
    xi = 0.35
    u = np.array([0.4, -1 + 0.3j])
    a = S.gen_fn("F", tau, math.sqrt(2) * xi, u / math.sqrt(2), scale="theta")
    assert np.allclose(a, S.gen_fn("F", tau, xi, u), rtol=1e-13)
    e = S.gen_fn("E", tau, math.sqrt(2) * xi, u / math.sqrt(2), scale="theta")
    assert np.allclose(e, S.gen_fn("E", tau, xi, u), rtol=1e-12, atol=1e-14)


def test_F_degree():
    assert len(S.gen_fn_coeffs(4, 0.3)) == 4
    assert len(S.gen_fn_coeffs(-1, 0.3)) == 0


# --- Vandermonde ------------------------------------------------------------

def test_vandermonde():
    assert S.vandermonde([2.5]) == 1
    assert S.vandermonde([3.0, 1.0]) == 2.0
    rng = np.random.default_rng(2)
    for n in range(1, 7):
        p = rng.normal(size=n)
        assert S.vandermonde(p, tilde=True) == (-1) ** (n * (n - 1) // 2) * S.vandermonde(p)
        assert abs(S.vandermonde_sq(p[None, :])[0] - S.vandermonde(p) ** 2) < 1e-10


# --- D and E operators ------------------------------------------------------

def gauss(u):
    return np.exp(-np.asarray(u) ** 2)


def test_D_identity():
    assert abs(S.apply_D(0, 0.3, gauss) - math.exp(-0.09)) < 1e-15


def test_D_antiderivative():
    assert abs(S.apply_D(-1, 0.0, lambda u: np.exp(-np.asarray(u))) + 1) < 1e-12


def test_D_divergent_tail():
    from tacnode.errors import AccuracyError
    with pytest.raises(AccuracyError):
        S.apply_D(-1, 0.0, lambda u: np.ones_like(np.asarray(u, dtype=float)))


def test_D_derivative_modes():
    exact = (4 * 0.3 ** 2 - 2) * math.exp(-0.09)
    assert abs(S.apply_D(2, 0.3, gauss) - exact) < 1e-10
    assert abs(S.apply_D(2, 0.3, gauss, analytic=False) - exact) < 1e-5
    assert abs(S.apply_D(2, 0.3, gauss, derivative=lambda k, x: exact) - exact) == 0


def test_D_composition_1_minus1():
    x = 0.25

    def h(xs):
        return np.array([S.apply_D(-1, float(np.real(t)), gauss) for t in np.atleast_1d(xs)])

    assert abs(S.apply_D(1, x, h, analytic=False) - gauss(x)) < 1e-6


def test_D_composition_minus2_1():
    x = -0.4
    dg = lambda u: -2 * np.asarray(u) * gauss(u)
    assert abs(S.apply_D(-2, x, dg) - S.apply_D(-1, x, gauss)) < 1e-10


@pytest.mark.parametrize("tau", [0, 2])
def test_E_zero_for_nonnegative(tau):
    assert S.apply_E(tau, 0.3, gauss) == 0


@pytest.mark.parametrize("tau", [-1, -2])
def test_E_two_forms(tau):
    # exp(v^2/2) g(v) must decay along the vertical line, so g grows like exp(v^2)
    g = lambda v: np.exp(np.asarray(v) ** 2)
    a = S.apply_E(tau, 0.3, g, form="single")
    b = S.apply_E(tau, 0.3, g, form="double")
    assert abs(a - b) < 1e-10


@pytest.mark.parametrize("eps", [1, -1])
def test_tail_integral_operator_identity_example(eps):
    lhs = S.tail_integral(1, 0.5, 0.2 + 0.1j)
    rhs = S.curly_F_weight(1, 0.5, 0.2 + 0.1j, eps)
    assert abs(lhs - rhs) < 1e-8


@pytest.mark.parametrize("tau", range(-2, 3))
@pytest.mark.parametrize("eps", [1, -1])
def test_rotated_line_derivative(tau, eps):
    for x, u in [(0.4, 0.3 + 0.2j), (-0.6, -0.1 - 0.3j)]:
        lhs = S.apply_D(tau, x, lambda t: S.f_weight(t, u))
        assert abs(lhs - S.rotated_line_D(tau, x, u, eps)) < 1e-8
