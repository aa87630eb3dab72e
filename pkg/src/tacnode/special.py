"""Hermite families, Phi integrals, truncated generating functions, f-weights
and the D / E operators.

Hermite values are produced by three-term recurrences that carry a separate
logarithmic scale, so that high degrees at large complex arguments neither
overflow nor underflow before the caller recombines them.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc

from . import contours as C
from .errors import AccuracyError, InvalidParameterError

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2 * math.pi)

KINDS = ("physicist", "probabilist", "orthonormal", "monic")

_RESCALE = 1e100


def _coeffs(kind, k):
    """Return (a, b) with p_{k+1} = a x p_k - b p_{k-1}."""
    if kind == "physicist":
        return 2.0, 2.0 * k
    if kind == "probabilist":
        return 1.0, float(k)
    if kind == "monic":
        return 1.0, 0.5 * k
    if kind == "orthonormal":
        return math.sqrt(2.0 / (k + 1)), math.sqrt(k / (k + 1.0))
    raise InvalidParameterError(f"unknown Hermite kind {kind!r}")


def hermite_table(kind, n, x, gaussian=False):
    """Degrees 0..n-1 of a Hermite family as mantissa and log-scale arrays.

    Parameters
    ----------
    kind : {'physicist', 'probabilist', 'orthonormal', 'monic'}
    n : int
        Number of degrees.
    x : array_like of complex
    gaussian : bool
        Multiply by exp(-x**2/2).  With ``kind='orthonormal'`` this gives the
        Hermite functions, orthonormal in L2(R).

    Returns
    -------
    mant, logs : ndarray, shape (n,) + x.shape
        The value of degree j is ``mant[j] * exp(logs[j])``.
    """
    if kind not in KINDS:
        raise InvalidParameterError(f"unknown Hermite kind {kind!r}")
    x = np.asarray(x, dtype=complex)
    mant = np.empty((n,) + x.shape, dtype=complex)
    logs = np.empty((n,) + x.shape, dtype=complex)
    if n == 0:
        return mant, logs
    p0 = np.full(x.shape, math.pi ** -0.25 if kind == "orthonormal" else 1.0, dtype=complex)
    lg = -0.5 * x * x if gaussian else np.zeros(x.shape, dtype=complex)
    pm = np.zeros(x.shape, dtype=complex)
    mant[0], logs[0] = p0, lg
    p = p0
    for k in range(n - 1):
        a, b = _coeffs(kind, k)
        p, pm = a * x * p - b * pm, p
        big = np.abs(p) > _RESCALE
        if np.any(big):
            s = np.where(big, np.abs(p), 1.0)
            p, pm = p / s, pm / s
            lg = lg + np.log(s)
        mant[k + 1], logs[k + 1] = p, lg
    return mant, logs


def hermite_scaled(kind, j, x):
    """Degree-j value as ``(mantissa, log_scale)``; see :func:`hermite_table`."""
    if j < 0:
        raise InvalidParameterError("Hermite degree must be nonnegative")
    m, lg = hermite_table(kind, j + 1, x)
    return m[j], lg[j]


def hermite(kind, j, x):
    """Hermite polynomial of degree ``j``.

    Examples
    --------
    >>> float(hermite('probabilist', 2, 3.0).real)
    8.0
    """
    m, lg = hermite_scaled(kind, j, x)
    out = m * np.exp(lg)
    return out if np.ndim(out) else complex(out)


def hermite_functions(n, x):
    """Orthonormal Hermite functions h_j(x) exp(-x^2/2), j < n, shape (n,) + x.shape."""
    m, lg = hermite_table("orthonormal", n, x, gaussian=True)
    return m * np.exp(lg)


def hermite_functions_deriv(n, x, k):
    """k-th derivative of the Hermite functions, degrees j < n.

    Uses psi_j' = sqrt(j/2) psi_{j-1} - sqrt((j+1)/2) psi_{j+1}.
    """
    psi = hermite_functions(n + k, x)
    for _ in range(k):
        m = psi.shape[0]
        out = np.zeros((m - 1,) + psi.shape[1:], dtype=complex)
        for j in range(m - 1):
            out[j] = -math.sqrt((j + 1) / 2) * psi[j + 1]
            if j > 0:
                out[j] += math.sqrt(j / 2) * psi[j - 1]
        psi = out
    return psi[:n]


def f_weight(x, u, lam=0.0):
    """f_lam(x, u) = sqrt(2) exp(-u^2 + 2 x u - x^2/2 + lam u)."""
    x = np.asarray(x, dtype=complex)
    u = np.asarray(u, dtype=complex)
    out = SQRT2 * np.exp(-u * u + 2 * x * u - 0.5 * x * x + lam * u)
    return out if np.ndim(out) else complex(out)


def f_weight_deriv(n, x, u, lam=0.0):
    """n-th x-derivative of f_lam(x, u): (-1)^n He_n(x - 2u) f_lam(x, u)."""
    return (-1) ** n * hermite("probabilist", n, np.asarray(x) - 2 * np.asarray(u)) * f_weight(x, u, lam)


def _half_moments(kmax, a):
    """M_k(a) = int_0^inf s^k exp(-(s-a)^2) ds for k = 0..kmax."""
    M = [0.5 * SQRT_PI * erfc(-a)]
    if kmax >= 1:
        M.append(0.5 * math.exp(-a * a) + a * M[0])
    for k in range(2, kmax + 1):
        M.append(a * M[k - 1] + 0.5 * (k - 1) * M[k - 2])
    return M


def phi(k, eta, sign=1):
    """Phi_k^{sign}(eta) = (1/2 pi i) int_{L_sign} exp(v^2 + 2 eta v) v^{-k-1} dv.

    Closed forms: an incomplete Gaussian moment for k >= 0, a Hermite
    polynomial times a Gaussian for k <= -1.

    Examples
    --------
    >>> round(phi(0, 0.0), 12)
    0.5
    """
    if sign not in (1, -1):
        raise InvalidParameterError("sign must be +1 or -1")
    eta = float(eta)
    if k >= 0:
        M = _half_moments(k, sign * eta)[k]
        return sign * (sign * 2.0) ** k / math.factorial(k) * M / SQRT_PI
    val = hermite("physicist", -k - 1, -sign * eta).real
    return sign * (sign * 2.0) ** k * math.exp(-eta * eta) * val / SQRT_PI


def gen_fn(variant, tau, xi, v, scale="xi"):
    """Truncated exponential generating function and its tail.

    ``scale='xi'``: F = sum_{j<tau} He_j(-xi) v^j / j!, and
    E = exp(-v^2/2 - xi v) - F.
    ``scale='theta'``: F = sum_{l<tau} H_l(-xi/2) v^l / l!, and
    E = exp(-v^2 - xi v) - F (here ``xi`` plays the role of theta).

    F vanishes identically for tau <= 0.
    """
    if variant not in ("F", "E"):
        raise InvalidParameterError("variant must be 'F' or 'E'")
    if scale not in ("xi", "theta"):
        raise InvalidParameterError("scale must be 'xi' or 'theta'")
    v = np.asarray(v, dtype=complex)
    F = np.zeros(v.shape, dtype=complex)
    if tau > 0:
        if scale == "xi":
            c = [hermite("probabilist", j, -xi).real / math.factorial(j) for j in range(tau)]
        else:
            c = [hermite("physicist", j, -xi / 2).real / math.factorial(j) for j in range(tau)]
        for cj in reversed(c):
            F = F * v + cj
    if variant == "F":
        out = F
    elif scale == "xi":
        out = np.exp(-0.5 * v * v - xi * v) - F
    else:
        out = np.exp(-v * v - xi * v) - F
    return out if np.ndim(out) else complex(out)


def gen_fn_coeffs(tau, xi):
    """Coefficients c_j, j < tau, of F^xi_tau(v) = sum c_j v^j."""
    return np.array([hermite("probabilist", j, -xi).real / math.factorial(j)
                     for j in range(max(tau, 0))])


def vandermonde(points, tilde=False):
    """Delta_n = prod_{i<j} (v_i - v_j); with ``tilde`` times (-1)^{n(n-1)/2}."""
    v = np.asarray(points, dtype=complex).ravel()
    n = v.size
    out = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            out *= v[i] - v[j]
    if tilde and (n * (n - 1) // 2) % 2:
        out = -out
    return out


def vandermonde_sq(w):
    """Squared Vandermonde over the last axis of ``w`` (vectorized)."""
    w = np.asarray(w, dtype=complex)
    n = w.shape[-1]
    out = np.ones(w.shape[:-1], dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (w[..., i] - w[..., j]) ** 2
    return out


def _cauchy_derivative(g, x, k, radius=0.5, nodes=64):
    th = 2 * math.pi * np.arange(nodes) / nodes
    e = np.exp(1j * th)
    vals = np.asarray(g(x + radius * e), dtype=complex)
    return math.factorial(k) * np.mean(vals * e ** (-k)) / radius ** k


def apply_D(tau, xi, g, derivative=None, analytic=True, spec=None, tail_length=12.0):
    """(Anti)derivative operator.

    tau >= 0: the tau-th derivative of g at xi.  tau < 0:
    -int_xi^inf (xi - u)^{-tau-1} / (-tau-1)! g(u) du.

    Parameters
    ----------
    derivative : callable, optional
        ``derivative(k, x)`` returning the k-th derivative exactly.
    analytic : bool
        When no callback is given, differentiate g by a Cauchy integral on a
        circle of radius 0.5 (g must accept complex input); otherwise use
        central differences with step eps**(1/(tau+2)).
    """
    if tau >= 0:
        if tau == 0:
            return complex(np.asarray(g(np.array([xi], dtype=complex)))[..., 0])
        if derivative is not None:
            return complex(derivative(tau, xi))
        if analytic:
            return complex(_cauchy_derivative(lambda z: g(z), xi, tau))
        h = np.finfo(float).eps ** (1.0 / (tau + 2))
        j = np.arange(tau + 1)
        coef = np.array([(-1) ** (tau - i) * math.comb(tau, i) for i in j], dtype=float)
        pts = xi + (j - tau / 2) * h
        return complex(np.dot(coef, np.asarray(g(pts), dtype=complex)) / h ** tau)
    m = -tau - 1
    fact = math.factorial(m)

    def integrand(u):
        return (xi - u) ** m / fact * np.asarray(g(u), dtype=complex)

    # grow the truncation point until the integrand is negligible there
    length = tail_length
    probe = xi + np.linspace(0.0, length, 64)
    scale = float(np.max(np.abs(integrand(probe))))
    while abs(complex(integrand(np.array([xi + length]))[0])) > 1e-17 * max(scale, 1e-300):
        length *= 1.5
        if length > 1e3:
            raise AccuracyError("tail of g does not decay", estimate=length)
    ray = C.real_ray(start=float(xi), sign=1, length=length)
    val, _ = C.integrate(integrand, ray, spec)
    return -complex(val)


def apply_E(tau, xi, g, form="single", spec=None, offset=0.7, radius=0.5):
    """The E operator acting on g analytic near the line L+.

    ``form='double'`` evaluates the nested Gamma_0 / L+ integral,
    ``form='single'`` the equivalent single L+ integral against F^xi_{-tau}.
    Identically zero for tau >= 0.
    """
    if tau >= 0:
        return 0j
    line = C.vertical_line(offset, half_length=12.0)
    if form == "single":
        k = -tau

        def integrand(v):
            return (np.exp(0.5 * v * v) * gen_fn("F", k, xi, v) * np.asarray(g(v))
                    / (SQRT_2PI * 1j * v ** k))

        val, _ = C.integrate(integrand, line, spec)
        return (-1) ** (tau + 1) * complex(val)
    if form != "double":
        raise InvalidParameterError("form must be 'single' or 'double'")
    if offset - radius < 0.1:
        raise InvalidParameterError("line must lie at least 0.1 right of the circle")

    def inner(w):
        def f(v):
            return (np.exp(0.5 * v * v) * np.asarray(g(v))[None, :]
                    / (2j * math.pi * (w[:, None] - v[None, :])))
        val, _ = C.integrate(f, line, spec)
        return SQRT_2PI * np.exp(-0.5 * w * w - xi * w) / (2j * math.pi * (-w) ** (-tau)) * val

    val, _ = C.integrate(inner, C.circle(radius), spec)
    return complex(val)


def fourier_laplace(g, v, half_length=12.0, spec=None):
    """int_R exp(u v) g(u) du / sqrt(2 pi) by real-line quadrature."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    ray_p = C.real_ray(0.0, 1, half_length)
    ray_m = C.real_ray(0.0, -1, half_length)

    def f(u):
        return np.exp(np.outer(v, u)) * np.asarray(g(u))[None, :] / SQRT_2PI

    a, _ = C.integrate(f, ray_p, spec)
    b, _ = C.integrate(f, ray_m, spec)
    return a - b


def apply_curly_F(tau, xi, g, g_laplace=None, derivative=None, spec=None):
    """D^tau_xi g + E^tau_xi applied to the Fourier-Laplace transform of g."""
    d = apply_D(tau, xi, g, derivative=derivative, spec=spec)
    if tau >= 0:
        return d
    if g_laplace is None:
        def g_laplace(v):
            return fourier_laplace(g, v, spec=spec)
    return d + apply_E(tau, xi, g_laplace, spec=spec)


def tail_integral(tau, xi, z, spec=None, half_length=14.0):
    """int_R exp(-y^2/2) E^xi_tau(i y) f(y, z) dy / (sqrt(2 pi) (-i y)^tau).

    The E tail vanishes to order tau at 0, so the integrand is entire and the
    side on which the line passes the origin is immaterial.  Equals
    eps^tau F^{-tau}_{eps xi}[f(-eps u, i z)] for either eps.
    """
    def f(y):
        y = np.asarray(y, dtype=complex)
        tail = np.exp(-1j * xi * y) - np.exp(-0.5 * y * y) * gen_fn("F", tau, xi, 1j * y)
        return tail / (SQRT_2PI * (-1j * y) ** tau) * f_weight(y, z)

    a, _ = C.integrate(f, C.real_ray(0.0, 1, half_length), spec)
    b, _ = C.integrate(f, C.real_ray(0.0, -1, half_length), spec)
    return complex(a - b)


def curly_F_weight(tau, xi, z, eps=1, spec=None):
    """eps^tau F^{-tau}_{eps xi} applied to u -> f(-eps u, i z), by quadrature."""
    if eps not in (1, -1):
        raise InvalidParameterError("eps must be +1 or -1")
    return eps ** tau * apply_curly_F(-tau, eps * xi, lambda u: f_weight(-eps * np.asarray(u), 1j * z),
                                      spec=spec)


def rotated_line_D(tau, x, u, eps=1, spec=None, offset=0.7):
    """int_{L^{-eps}} exp(eps x a) f(eps i a, i u) da / (i sqrt(2 pi) (eps a)^{-tau}).

    The line Re a = -eps offset; equals D^tau_x f(., u).
    """
    if eps not in (1, -1):
        raise InvalidParameterError("eps must be +1 or -1")
    line = C.vertical_line(-eps * offset, half_length=12.0)

    def f(a):
        return np.exp(eps * x * a) * (eps * a) ** tau / (1j * SQRT_2PI) * f_weight(eps * 1j * a, 1j * u)

    val, _ = C.integrate(f, line, spec)
    return complex(val)
