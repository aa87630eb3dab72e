"""Airy-type functions and the two limiting kernels.

Orientation: the left wedge C_L runs upwards from exp(4 pi i/3) infinity to
exp(2 pi i/3) infinity and the right wedge C_R upwards from exp(-i pi/3)
infinity to exp(i pi/3) infinity.  With this choice the tau = 0 function is
the classical Airy function Ai.
"""
from __future__ import annotations

import math

import numpy as np

from . import contours as C
from .errors import AccuracyError, ExcludedSectorError

_TWO_PI_I = 2j * math.pi


def airy_cubic(u, xi):
    """A_u(xi) = u^3/3 - u xi."""
    return u ** 3 / 3 - u * xi


def _vertex(x):
    # place the vertex near the saddle point -sqrt(x) when x is large
    return np.maximum(1.0, np.sqrt(np.maximum(x, 0.0)))


def _arm_length(x):
    return max(12.0, 4.0 * math.sqrt(float(np.max(np.abs(x)))) + 8.0)


def _wedge_part(tau, x, side, spec):
    """int over the wedge of exp(-+A_u(x)) du / (2 pi i u^tau), vectorized in x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vx = _vertex(x)[:, None]
    wedge = C.airy_wedge(side, arm_length=_arm_length(x), vertex=0.0)
    if side == "left":
        def f(z):
            u = z[None, :] - vx
            return np.exp(-airy_cubic(u, x[:, None])) / (_TWO_PI_I * u ** tau)
    else:
        def f(z):
            u = z[None, :] + vx
            return np.exp(airy_cubic(u, x[:, None])) / (_TWO_PI_I * u ** tau)
    val, _ = C.integrate(f, wedge, spec)
    return val


def _circle_part(tau, x, kind, spec, radius=0.5):
    """Gamma_0 integral of exp(-A_u(x)) ('cubic') or exp(u x) ('linear') / (2 pi i u^tau)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if tau <= 0:
        return np.zeros(x.shape, dtype=complex)
    if kind == "cubic":
        f = lambda u: np.exp(-airy_cubic(u[None, :], x[:, None])) / (_TWO_PI_I * u[None, :] ** tau)
    elif kind == "cubic_right":
        f = lambda u: np.exp(airy_cubic(u[None, :], x[:, None])) / (_TWO_PI_I * u[None, :] ** tau)
    elif kind == "linear":
        f = lambda u: np.exp(u[None, :] * x[:, None]) / (_TWO_PI_I * u[None, :] ** tau)
    else:
        f = lambda u: np.exp(-u[None, :] * x[:, None]) / (_TWO_PI_I * u[None, :] ** tau)
    val, _ = C.integrate(f, C.circle(radius), spec)
    return val


def _out(v, x):
    v = np.real_if_close(v, tol=1e6)
    return float(np.real(v[0])) if np.ndim(x) == 0 else np.real(v)


def airy_tau0(tau, xi, rep="left", spec=None):
    """The tau-Airy function A^(0)_tau(xi).

    rep='left'  : int_{C_L + Gamma_0} exp(-A_u(xi)) du / (2 pi i u^tau)
    rep='right' : (-1)^tau int_{C_R - Gamma_0} exp(A_u(xi)) du / (2 pi i u^tau)
    """
    if rep == "left":
        v = _wedge_part(tau, xi, "left", spec) + _circle_part(tau, xi, "cubic", spec)
    else:
        v = (-1) ** tau * (_wedge_part(tau, xi, "right", spec)
                           - _circle_part(tau, xi, "cubic_right", spec))
    return _out(v, xi)


def airy_tau_ext(tau, xi, rep="left", spec=None):
    """Extended function A_tau(xi): the Gamma_0 part carries exp(u xi) only.

    For tau >= 1 the Gamma_0 part equals xi^{tau-1}/(tau-1)!.
    """
    if rep == "left":
        v = _wedge_part(tau, xi, "left", spec) + _circle_part(tau, xi, "linear", spec)
    else:
        v = (-1) ** tau * (_wedge_part(tau, xi, "right", spec)
                           - _circle_part(tau, xi, "linear_neg", spec))
    return _out(v, xi)


def excluded(tau1, tau2):
    """True in the oscillatory sector tau2 < 0 < tau1."""
    return tau2 < 0 < tau1


def _mu_integral(fa, fb, x1, x2, tol=1e-12, mu_max=20.0):
    """int_0^inf fa(mu + x1) fb(mu + x2) dmu with an adaptively grown upper limit."""
    while True:
        mu, wmu = C.gauss_panels(0.0, mu_max, 8)
        vals = np.real(fa(mu + x1) * fb(mu + x2))
        total = float(np.dot(vals, wmu))
        last = mu > mu_max - 1.0
        if abs(float(np.dot(vals[last], wmu[last]))) < tol / 10:
            return total
        if mu_max >= 160:
            raise AccuracyError("mu integral does not decay", value=total)
        mu_max *= 2


def _power(z, m):
    return z ** (m - 1) / math.factorial(m - 1)


def tcusp_kernel(tau1, xi1, tau2, xi2, spec=None):
    """Transversal cusp-Airy kernel.

    Indicator part
    (-1{0 <= tau2 < tau1} 1{xi1 >= xi2} + 1{tau2 < tau1 <= 0} 1{xi2 >= xi1})
    (xi1 - xi2)^{tau1-tau2-1}/(tau1-tau2-1)!  plus
    (-1)^tau2 int_0^inf A_tau1(mu + xi1) A_{-tau2}(mu + xi2) dmu.
    """
    if excluded(tau1, tau2):
        raise ExcludedSectorError("no limit kernel for tau2 < 0 < tau1")
    m = tau1 - tau2
    ind = 0.0
    if 0 <= tau2 < tau1 and xi1 >= xi2:
        ind = -_power(xi1 - xi2, m)
    elif tau2 < tau1 <= 0 and xi2 >= xi1:
        ind = _power(xi1 - xi2, m)
    fa = lambda x: airy_tau_ext(tau1, x, spec=spec)
    fb = lambda x: airy_tau_ext(-tau2, x, spec=spec)
    return ind + (-1) ** tau2 * _mu_integral(fa, fb, xi1, xi2)


def _cusp_indicator(tau1, xi1, tau2, xi2):
    if tau2 < tau1 and xi1 >= xi2:
        return -_power(xi1 - xi2, tau1 - tau2)
    return 0.0


def cusp_kernel(tau1, xi1, tau2, xi2, form="product", spec=None, nodes_per_unit=16,
                n_circle=96):
    """Cusp-Airy kernel.

    form='product' : indicator + (-1)^tau2 int_0^inf A0_tau1 A0_{-tau2} dmu
    form='double'  : indicator + (2 pi i)^{-2} int_{C_L + Gamma_z} dz
                     int_{C_R - Gamma_v} dv v^tau2 exp(v^3/3 - v xi2)
                     / ((v - z) z^tau1 exp(z^3/3 - z xi1)).

    In the double form the two circles are nested so that the pole at z = v
    is never enclosed by a circle carrying no other pole: the z-circle is the
    inner one when tau1 <= 0 and tau2 < 0, the outer one otherwise.
    """
    ind = _cusp_indicator(tau1, xi1, tau2, xi2)
    if form == "product":
        if excluded(tau1, tau2):
            raise ExcludedSectorError("product form needs NOT (tau2 < 0 < tau1)")
        fa = lambda x: airy_tau0(tau1, x, spec=spec)
        fb = lambda x: airy_tau0(-tau2, x, spec=spec)
        return ind + (-1) ** tau2 * _mu_integral(fa, fb, xi1, xi2)
    if form != "double":
        raise ValueError("form must be 'product' or 'double'")
    rz, rv = (0.3, 0.5) if (tau1 <= 0 and tau2 < 0) else (0.5, 0.3)
    L = _arm_length(np.array([xi1, xi2]))
    zw, ww = C.airy_wedge("left", arm_length=L, vertex=-1.0).rule(nodes_per_unit)
    vw, wv = C.airy_wedge("right", arm_length=L, vertex=1.0).rule(nodes_per_unit)
    th = 2 * math.pi * np.arange(n_circle) / n_circle
    ez = np.exp(1j * th)
    zc, wzc = rz * ez, 1j * rz * ez * (2 * math.pi / n_circle)
    vc, wvc = rv * ez, -1j * rv * ez * (2 * math.pi / n_circle)
    z = np.concatenate([zw, zc])
    wz = np.concatenate([ww, wzc])
    v = np.concatenate([vw, vc])
    wvv = np.concatenate([wv, wvc])
    gz = wz * np.exp(-(z ** 3 / 3 - z * xi1)) * z ** (-float(tau1))
    gv = wvv * np.exp(v ** 3 / 3 - v * xi2) * v ** float(tau2)
    val = gz @ (1.0 / (v[None, :] - z[:, None])) @ gv / _TWO_PI_I ** 2
    return ind + float(np.real(val))


def airy_kernel(x, y):
    """Classical Airy kernel int_0^inf Ai(x + mu) Ai(y + mu) dmu (scipy Ai)."""
    from scipy.special import airy
    return _mu_integral(lambda t: airy(t)[0], lambda t: airy(t)[0], x, y)
