"""The finite-n GUE kernel and its alternative representations.

K_n(x, y) = sum_{j<n} psi_j(x) psi_j(y) with psi_j the orthonormal Hermite
functions.  The sum form is the production path; the Christoffel-Darboux
quotient and the contour forms exist for cross-checks.
"""
from __future__ import annotations

import math

import numpy as np

from . import contours as C
from .errors import InvalidParameterError
from .special import (SQRT2, SQRT_2PI, f_weight, hermite, hermite_table)


def _check(n):
    if int(n) != n or n < 1:
        raise InvalidParameterError("GUE order n must be a positive integer")


def _scalar(a):
    return complex(a) if np.ndim(a) == 0 else a


def gue_kernel(n, x, y):
    """K_n(x, y) for complex x, y (broadcast), by the scaled Hermite sum.

    Examples
    --------
    >>> round(gue_kernel(1, 0.0, 0.0).real, 10)
    0.5641895835
    """
    _check(n)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    mx, lx = hermite_table("orthonormal", n, x, gaussian=True)
    my, ly = hermite_table("orthonormal", n, y, gaussian=True)
    return _scalar(np.sum(mx * my * np.exp(lx + ly), axis=0))


def gue_kernel_matrix(n, x, y):
    """K_n(x_i, y_j) on the outer product of two node arrays."""
    _check(n)
    px = hermite_functions_safe(n, x)
    py = hermite_functions_safe(n, y)
    return px.T @ py


def hermite_functions_safe(n, x):
    """Hermite functions psi_j(x), j < n, shape (n, len(x))."""
    m, lg = hermite_table("orthonormal", n, np.atleast_1d(np.asarray(x, dtype=complex)), gaussian=True)
    return m * np.exp(lg)


def gue_kernel_cd(n, x, y):
    """Christoffel-Darboux quotient form; an oracle only, needs x != y."""
    _check(n)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if np.any(np.abs(x - y) < 1e-3):
        raise InvalidParameterError("quotient form is only used for |x - y| > 1e-3")
    c2 = math.factorial(n - 1) * math.sqrt(math.pi) / 2 ** (n - 1)
    pn = lambda t: hermite("monic", n, t)
    pm = lambda t: hermite("monic", n - 1, t)
    val = (pn(x) * pm(y) - pn(y) * pm(x)) / (c2 * (x - y)) * np.exp(-0.5 * (x * x + y * y))
    return _scalar(val)


def gue_kernel_contour(n, x, y, spec=None, radius=0.5, offset=1.0):
    """Double contour form over Gamma_0 (u) and L+ (w) with kernel 1/(w - u)."""
    _check(n)
    line = C.vertical_line(offset, half_length=10.0)

    def outer(u):
        def inner(w):
            return ((w[None, :] / u[:, None]) ** n
                    * f_weight(x, u)[:, None] / f_weight(y, w)[None, :]
                    / (2j * math.pi * (w[None, :] - u[:, None])))
        val, _ = C.integrate(inner, line, spec)
        return 2 * val / (2j * math.pi)

    val, _ = C.integrate(outer, C.circle(radius), spec)
    return complex(val)


def gue_kernel_lambda(n, x, y, spec=None, radius=0.2, offset=1.5, lam_max=30.0):
    """The lambda-augmented form: 1/(w-u) replaced by int_0^inf exp(lam (u-w)) dlam.

    For each lam the u and w integrals decouple.
    """
    _check(n)
    circ = C.circle(radius)
    line = C.vertical_line(offset, half_length=10.0)

    def over_lam(lam):
        lam = lam[:, None]
        a, _ = C.integrate(lambda u: u[None, :] ** (-n) * f_weight(x, u)[None, :]
                           * np.exp(lam * u[None, :]) / (2j * math.pi), circ, spec)
        b, _ = C.integrate(lambda w: w[None, :] ** n / f_weight(y, w)[None, :]
                           * np.exp(-lam * w[None, :]) / (2j * math.pi), line, spec)
        return 2 * a * b

    val, _ = C.integrate(over_lam, C.real_ray(0.0, 1, lam_max), spec)
    return complex(val)


def gue_kernel_tilde(n, w, u):
    """K~_n(w, u) = K_n(-i sqrt2 w, -i sqrt2 u)."""
    return gue_kernel(n, -1j * SQRT2 * np.asarray(w), -1j * SQRT2 * np.asarray(u))


def gue_fourier(n, xi, y):
    """K^_n(xi, y) = int exp(i xi x) K_n(x, y) dx / sqrt(2 pi), closed form.

    The Fourier transform maps psi_j to i^j psi_j.
    """
    _check(n)
    xi, y = np.broadcast_arrays(np.asarray(xi, dtype=complex), np.asarray(y, dtype=complex))
    mx, lx = hermite_table("orthonormal", n, xi, gaussian=True)
    my, ly = hermite_table("orthonormal", n, y, gaussian=True)
    ph = (1j ** np.arange(n)).reshape((n,) + (1,) * xi.ndim)
    return _scalar(np.sum(ph * mx * my * np.exp(lx + ly), axis=0))


def gue_double_fourier(n, xi1, xi2):
    """Fourier transform in both variables; equals K_n(xi1, -xi2)."""
    return gue_kernel(n, xi1, -np.asarray(xi2))


def gue_partial(k, l, n, x, y, spec=None, radius=0.5, offset=1.0):
    """(-d/dx)^k (d/dy)^l K_n(x, y) from the contour form.

    Differentiating f(x, u) and 1/f(y, w) inserts He_k(x - 2u) and
    i^l He_l(-i (y - 2w)) in the double contour integrand.
    """
    _check(n)
    if not (0 <= k <= 6 and 0 <= l <= 6):
        raise InvalidParameterError("derivative orders must lie in 0..6")
    line = C.vertical_line(offset, half_length=10.0)

    def outer(u):
        hu = hermite("probabilist", k, x - 2 * u)

        def inner(w):
            hw = 1j ** l * hermite("probabilist", l, -1j * (y - 2 * w))
            return ((w[None, :] / u[:, None]) ** n
                    * (f_weight(x, u) * hu)[:, None] * (hw / f_weight(y, w))[None, :]
                    / (2j * math.pi * (w[None, :] - u[:, None])))
        val, _ = C.integrate(inner, line, spec)
        return 2 * val / (2j * math.pi)

    val, _ = C.integrate(outer, C.circle(radius), spec)
    return complex(val)


def eigen_rotated(n, u, sign=1, spec=None, offset=0.7):
    """2 pi sqrt2 int_{L+-} K_n(-i sqrt2 u, -i sqrt2 w) exp(w^2) dw / (2 pi i).

    Equals exp(u^2) by the eigenfunction identity.
    """
    line = C.vertical_line(sign * offset, half_length=10.0)
    val, _ = C.integrate(lambda w: gue_kernel_tilde(n, u, w) * np.exp(w * w) / (2j * math.pi),
                         line, spec)
    return 2 * math.pi * SQRT2 * complex(val)


__all__ = ["gue_kernel", "gue_kernel_matrix", "gue_kernel_cd", "gue_kernel_contour",
           "gue_kernel_lambda", "gue_kernel_tilde", "gue_fourier", "gue_double_fourier",
           "gue_partial", "eigen_rotated", "hermite_functions_safe", "SQRT_2PI"]
