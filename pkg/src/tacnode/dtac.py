"""The discrete tacnode kernel.

Two evaluation routes:

* :func:`dtac_general` -- the five-term formula with Theta functions computed
  by direct quadrature (theta-scale, small r, any rho and beta);
* :func:`dtac_rho0` -- the rho = beta = 0 reduction L0 + L1 + L2 in the
  xi-scale, built on the GUE kernel and usable up to r of a few hundred.

Because K_r(x, y) = sum_j psi_j(x) psi_j(y), every double integral against
K_r splits into a sum over j of products of single integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import contours as C
from .errors import InvalidParameterError, UnsupportedSizeError
from .gue import hermite_functions_safe
from .special import (SQRT2, SQRT_2PI, gen_fn, hermite_functions_deriv)
from .theta import theta_direct

_TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class DTacParams:
    """Kernel parameters: filament count r, strip width rho and free beta."""

    r: int
    rho: int = 0
    beta: float = 0.0

    def __post_init__(self):
        if self.r < 0 or self.rho < 0:
            raise InvalidParameterError("r and rho must be nonnegative")


def heaviside_term(m, z):
    """H^m(z) = z^{m-1}/(m-1)! for z >= 0 and m >= 1, else 0."""
    if m < 1 or z < 0:
        return 0.0
    return z ** (m - 1) / math.factorial(m - 1)


# ---------------------------------------------------------------------------
# rho = beta = 0, xi-scale

def _line(offset, r=0, extra=0.0):
    return C.vertical_line(offset, half_length=math.sqrt(2 * r + 1) + 10.0 + extra)


def l1_terms(tau1, xi1, tau2, xi2, spec=None, offset=0.7):
    """The three single-integral pieces (L11, L12, L13) of the L1 term."""
    m = tau1 - tau2
    line = _line(offset, extra=abs(xi1) + abs(xi2))

    def f(v):
        base = np.exp(0.5 * v * v) / (_TWO_PI_I * v ** m)
        F1 = gen_fn("F", tau1, xi1, v)
        F2 = gen_fn("F", -tau2, -xi2, v)
        return np.stack([base * np.exp(xi2 * v) * F1,
                         base * np.exp(-xi1 * v) * F2,
                         -base * np.exp(0.5 * v * v) * F1 * F2])

    out = np.zeros(3, dtype=complex)
    if tau1 <= 0 and tau2 >= 0:
        return out
    val, _ = C.integrate(f, line, spec)
    return val


def _l2_factor(r, tau, xi, spec):
    """int_{L} exp(u^2/2) E^xi_tau(u) u^{-tau} psi_j(-iu) du / (sqrt(2 pi) i), j < r.

    The integrand is entire, so the line may sit on either side of 0; it is
    placed on the side where exp(-xi u) is small.
    """
    offset = 0.7 if xi >= 0 else -0.7
    line = _line(offset, r)

    def f(u):
        eu = np.exp(-xi * u) - np.exp(0.5 * u * u) * gen_fn("F", tau, xi, u)
        return hermite_functions_safe(r, -1j * u) * (eu * u ** (-tau) / (SQRT_2PI * 1j))[None, :]

    val, _ = C.integrate(f, line, spec)
    return val


def l2_contour(r, tau1, xi1, tau2, xi2, spec=None):
    """L2: double L+ integral of the E-tails against K_r(-iu, -iv)."""
    if r < 1:
        return 0j
    A = _l2_factor(r, tau1, xi1, spec)
    B = _l2_factor(r, -tau2, -xi2, spec)
    return complex(np.sum(A * B))


def dtac_rho0(r, tau1, xi1, tau2, xi2, spec=None, parts=False):
    """The rho = beta = 0 kernel M = L0 + L1 + L2 in the xi-scale.

    M is the density with respect to dxi of
    (sqrt2)^{tau2 - tau1} L^dTac(tau1, sqrt2 xi1; tau2, sqrt2 xi2) sqrt2 dxi.

    Parameters
    ----------
    r : int
        Filament count (number of GUE terms), r >= 1.
    tau1, xi1, tau2, xi2 : evaluation points.
    parts : bool
        Also return the dictionary of L0, L11, L12, L13, L2.
    """
    if r < 1:
        raise InvalidParameterError("dtac_rho0 needs r >= 1")
    l0 = -heaviside_term(tau1 - tau2, xi2 - xi1)
    l1 = l1_terms(tau1, xi1, tau2, xi2, spec)
    l2 = l2_contour(r, tau1, xi1, tau2, xi2, spec)
    total = l0 + complex(np.sum(l1)) + l2
    if parts:
        return total, {"L0": l0, "L11": complex(l1[0]), "L12": complex(l1[1]),
                       "L13": complex(l1[2]), "L2": l2}
    return total


def dtac_rho0_theta(r, tau1, th1, tau2, th2, spec=None, offset=0.7):
    """The same kernel written in the theta-scale with the tilde functions.

    Returns the density with respect to d theta; compare with dtac_general.
    """
    m = tau1 - tau2
    l0 = -heaviside_term(m, th2 - th1)
    line = _line(offset, r, abs(th1) + abs(th2))

    def f(u):
        base = np.exp(u * u) / (_TWO_PI_I * u ** m)
        F1 = gen_fn("F", tau1, th1, u, scale="theta")
        F2 = gen_fn("F", -tau2, -th2, u, scale="theta")
        return base * (np.exp(th2 * u) * F1 + np.exp(-th1 * u) * F2 - np.exp(u * u) * F1 * F2)

    l1 = 0j
    if not (tau1 <= 0 and tau2 >= 0):
        l1, _ = C.integrate(f, line, spec)

    def g(tau, th):
        off = 0.7 if th >= 0 else -0.7
        ln = _line(off, r, 0.0)

        def h(u):
            e = np.exp(-th * u) - np.exp(u * u) * gen_fn("F", tau, th, u, scale="theta")
            return (hermite_functions_safe(r, -1j * SQRT2 * u)
                    * (e * u ** (-tau) / _TWO_PI_I)[None, :])

        val, _ = C.integrate(h, ln, spec)
        return val

    l2 = 2 * math.pi * SQRT2 * complex(np.sum(g(tau1, th1) * g(-tau2, -th2)))
    return l0 + complex(l1) + l2


def theta_to_xi_scale(value, tau1, tau2):
    """Convert a theta-scale density to the xi-scale kernel M."""
    return SQRT2 ** (tau2 - tau1) * value * SQRT2


# ---------------------------------------------------------------------------
# operator form of L2

def _curly_F_hermite(r, sigma, x, s, spec):
    """F-operator of order sigma at x applied to psi_j(s u), j < r.

    Returns the D part and the E part separately.
    """
    sj = s ** np.arange(r)
    if sigma >= 0:
        d = sj * hermite_functions_deriv(r, np.array([x], dtype=complex), sigma)[:, 0]
    else:
        k = -sigma - 1
        fact = math.factorial(k)
        length = abs(x) + math.sqrt(2 * r + 1) + 12.0
        ray = C.real_ray(float(x), 1, length)
        val, _ = C.integrate(
            lambda u: hermite_functions_safe(r, u) * ((x - u) ** k / fact)[None, :], ray, spec)
        d = -sj * val
    if sigma >= 0:
        return d, np.zeros(r, dtype=complex)
    k = -sigma
    line = _line(0.7, r, abs(x))
    ij = (1j ** np.arange(r)) * sj

    def f(v):
        return (hermite_functions_safe(r, -1j * v)
                * (np.exp(0.5 * v * v) * gen_fn("F", k, x, v) / (SQRT_2PI * 1j * v ** k))[None, :])

    val, _ = C.integrate(f, line, spec)
    e = (-1) ** (sigma + 1) * ij * val
    return d, e


def l2_operator_form(r, tau1, xi1, tau2, xi2, eps=(1, 1), spec=None, parts=False):
    """L2 = (-e1)^tau1 (-e2)^tau2 F^{-tau1}_{e1 xi1}(u) F^{tau2}_{-e2 xi2}(v) K_r(e1 u, -e2 v).

    The four products D.D, D.E, E.D, E.E are the pieces L21..L24.
    """
    e1, e2 = eps
    if e1 not in (1, -1) or e2 not in (1, -1):
        raise InvalidParameterError("eps entries must be +1 or -1")
    pref = (-e1) ** tau1 * (-e2) ** tau2
    d1, E1 = _curly_F_hermite(r, -tau1, e1 * xi1, e1, spec)
    d2, E2 = _curly_F_hermite(r, tau2, -e2 * xi2, -e2, spec)
    pieces = {"L21": pref * complex(np.sum(d1 * d2)), "L22": pref * complex(np.sum(d1 * E2)),
              "L23": pref * complex(np.sum(E1 * d2)), "L24": pref * complex(np.sum(E1 * E2))}
    total = sum(pieces.values())
    return (total, pieces) if parts else total


def l24(r, tau1, xi1, tau2, xi2, eps=(1, 1), spec=None, offset=0.7):
    """The E.E piece as an explicit double L+ integral against K_r(e1 i v1, e2 i v2)."""
    e1, e2 = eps
    if tau1 <= 0 or tau2 >= 0:
        return 0j
    line = _line(offset, r, abs(xi1) + abs(xi2))

    def fac(tau, x, s):
        def f(v):
            return (hermite_functions_safe(r, s * 1j * v)
                    * (np.exp(0.5 * v * v) * gen_fn("F", tau, x, v) / (SQRT_2PI * 1j * v ** tau))[None, :])
        val, _ = C.integrate(f, line, spec)
        return val

    P = fac(tau1, e1 * xi1, e1)
    Q = fac(-tau2, -e2 * xi2, e2)
    pref = (-e1) ** tau1 * (-e2) ** tau2 * (-1) ** (tau1 + tau2)
    return pref * complex(np.sum(P * Q))


# ---------------------------------------------------------------------------
# general five-term kernel, theta-scale

def term_supports(tau1, tau2, rho):
    """Which of the four double-contour terms can be nonzero.

    A Gamma_0 integral vanishes unless its integrand has a pole at 0:
    the first term needs tau1 > rho, the second tau2 < 0, the fourth both.
    The third term (two L+ lines) is always present.
    """
    return {"T1": tau1 > rho, "T2": tau2 < 0, "T3": True, "T4": tau1 > rho and tau2 < 0}


@dataclass(frozen=True)
class GeneralGrid:
    """Fixed quadrature resolution for :func:`dtac_general`."""

    n_circle: int = 32
    radius: float = 0.35
    z_offset: float = 0.7
    w_offset: float = 1.1
    h: float = 0.1
    half_length: float = 6.5
    h_theta: float = 0.15


def dtac_general(p, tau1, th1, tau2, th2, grid=None, skip_zero=True, parts=False):
    """The five-term kernel L^dTac_{r, rho, beta}(tau1, th1; tau2, th2).

    Theta functions come from :func:`theta.theta_direct`, so r is limited to 3.

    Parameters
    ----------
    p : DTacParams
    grid : GeneralGrid, optional
    skip_zero : bool
        Skip terms outside their support (see :func:`term_supports`).
        With False every term is integrated, which is used to test supports.
    """
    if not isinstance(p, DTacParams):
        p = DTacParams(*p)
    r, rho, beta = p.r, p.rho, p.beta
    if r > 3:
        raise UnsupportedSizeError("dtac_general evaluates Theta directly and needs r <= 3")
    g = grid or GeneralGrid()
    n = g.n_circle
    ang = np.exp(2j * math.pi * np.arange(n) / n)
    vc = g.radius * ang
    wc = 1j * vc * (2 * math.pi / n) / _TWO_PI_I  # dv / (2 pi i)
    m = int(math.ceil(g.half_length / g.h))
    t = g.h * np.arange(-m, m + 1)
    zl = g.z_offset + 1j * t
    wl = np.full(zl.shape, 1j * g.h) / _TWO_PI_I
    th_kw = dict(rho=rho, beta=beta, offset=g.w_offset, h=g.h_theta)
    t00 = theta_direct("Theta_r", r, v=0.0, z=0.0, **th_kw)
    sup = term_supports(tau1, tau2, rho)
    terms = {"T0": -heaviside_term(tau1 - tau2, th2 - th1), "T1": 0j, "T2": 0j, "T3": 0j, "T4": 0j}

    V, Z = np.meshgrid(vc, zl, indexing="ij")
    if (sup["T1"] or sup["T2"]) or not skip_zero:
        th = theta_direct("Theta_r", r, v=V, z=Z, **th_kw) / t00
        base = th / (Z - V) * np.outer(wc, wl)
        if sup["T1"] or not skip_zero:
            f = V ** (rho - tau1) * Z ** (tau2 - rho) * np.exp(-V * V - th1 * V + Z * Z + th2 * Z)
            terms["T1"] = complex(np.sum(f * base))
        if sup["T2"] or not skip_zero:
            f = V ** tau2 * Z ** (-tau1) * np.exp(-V * V + (th2 - beta) * V + Z * Z - (th1 - beta) * Z)
            terms["T2"] = complex(np.sum(f * base))
    if r >= 1:
        V3, Z3 = np.meshgrid(zl, zl, indexing="ij")
        thp = theta_direct("Theta_plus_rminus1", r, v=V3, z=Z3, **th_kw) / t00
        f = (V3 ** (-tau1) * Z3 ** (tau2 - rho)
             * np.exp(V3 * V3 - (th1 - beta) * V3 + Z3 * Z3 + th2 * Z3))
        terms["T3"] = r * complex(np.sum(f * thp * np.outer(wl, wl)))
    if sup["T4"] or not skip_zero:
        V4, Z4 = np.meshgrid(vc, vc, indexing="ij")
        thm = theta_direct("Theta_minus_rplus1", r, v=V4, z=Z4, **th_kw) / t00
        f = (V4 ** (rho - tau1) * Z4 ** tau2
             * np.exp(-V4 * V4 - th1 * V4 - Z4 * Z4 + (th2 - beta) * Z4))
        terms["T4"] = -complex(np.sum(f * thm * np.outer(wc, wc))) / (r + 1)
    total = sum(terms.values())
    return (total, terms) if parts else total
