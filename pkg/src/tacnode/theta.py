"""Theta functions: r-fold contour integrals with a squared Vandermonde weight.

``theta_direct`` evaluates them by tensor-product quadrature over a shared
node set on a vertical line (an oracle, limited to four folds).
``theta_ratio`` evaluates the three ratio identities through the GUE kernel,
which scales to large r.
"""
from __future__ import annotations

import math

import numpy as np

from . import contours as C
from .errors import InvalidParameterError, UnsupportedSizeError
from .gue import hermite_functions_safe
from .special import SQRT2

VARIANTS = ("Theta_r", "Theta_plus_rminus1", "Theta_minus_rplus1")
MAX_FOLD = 4


def fold_count(variant, r):
    if variant not in VARIANTS:
        raise InvalidParameterError(f"unknown Theta variant {variant!r}")
    return {"Theta_r": r, "Theta_plus_rminus1": r - 1, "Theta_minus_rplus1": r + 1}[variant]


def _line_nodes(offset, rho, beta, h, fold):
    # |exp(2 w^2)| = exp(2 c^2 - 2 t^2); the Vandermonde adds polynomial growth
    T = math.sqrt(offset ** 2 + 20.0 + 2.0 * fold)
    m = int(math.ceil(T / h))
    t = h * np.arange(-m, m + 1)
    w = offset + 1j * t
    # dw / (2 pi i) = h / (2 pi)
    wt = np.exp(2 * w * w + beta * w) * w ** (-rho) * h / (2 * math.pi)
    return w, wt


def _ratio_factors(variant, v, z, w):
    V = v[:, None]
    Z = z[:, None]
    W = w[None, :]
    if variant == "Theta_r":
        return (Z - W) / (V - W)
    if variant == "Theta_plus_rminus1":
        return (Z - W) * (V - W)
    return 1.0 / ((Z - W) * (V - W))


def _weight_tensor(w, wt, fold):
    """prod_alpha wt[k_alpha] * Delta^2(w_k) as a dense tensor of rank fold."""
    N = w.size
    W = np.ones((N,) * fold, dtype=complex)
    for a in range(fold):
        shape = [1] * fold
        shape[a] = N
        W = W * wt.reshape(shape)
    for a in range(fold):
        for b in range(a + 1, fold):
            sa = [1] * fold
            sb = [1] * fold
            sa[a] = N
            sb[b] = N
            W = W * (w.reshape(sa) - w.reshape(sb)) ** 2
    return W


def _contract(W, R):
    """sum_k W[k_1..k_f] prod_alpha R[p, k_alpha] for every row p of R."""
    fold = W.ndim
    N = R.shape[1]
    T = W.reshape(-1, N) @ R.T  # (N^{f-1}, P)
    for _ in range(fold - 1):
        T = T.reshape(-1, N, T.shape[-1])
        T = np.einsum("anp,pn->ap", T, R)
    return T.reshape(-1)


def theta_direct(variant, r, rho=0, beta=0.0, v=0.0, z=0.0, offset=None, h=None,
                 block=512):
    """Direct tensor-product quadrature of Theta_r, Theta+_{r-1} or Theta-_{r+1}.

    Parameters
    ----------
    variant : {'Theta_r', 'Theta_plus_rminus1', 'Theta_minus_rplus1'}
    r : int
    rho : int
        Power in the w^{-rho} factor.
    beta : float
    v, z : complex or array_like
        Broadcast against each other; one value per pair.
    offset : float, optional
        Real part of the w-line.  Defaults to
        max(0.7, 1.2 max|Re v|, max Re + 0.4) so every pole lies to its left.
    h : float, optional
        Trapezoid step along the line; defaults to min(0.15, gap / 5) where
        gap is the distance from the line to the nearest pole.

    Returns
    -------
    complex or ndarray
    """
    fold = fold_count(variant, r)
    if fold > MAX_FOLD:
        raise UnsupportedSizeError(f"direct quadrature supports at most {MAX_FOLD} folds")
    v_in, z_in = np.broadcast_arrays(np.asarray(v, dtype=complex), np.asarray(z, dtype=complex))
    shape = v_in.shape
    v1 = v_in.ravel()
    z1 = z_in.ravel()
    if fold <= 0:
        out = np.ones(shape, dtype=complex)
        return complex(out) if out.ndim == 0 else out
    if offset is None:
        re = np.abs(np.concatenate([v1.real, z1.real]))
        offset = max(0.7, 1.2 * float(re.max()), float(re.max()) + 0.4)
    if h is None:
        poles = v1 if variant == "Theta_r" else np.concatenate([v1, z1])
        gap = offset - (float(poles.real.max()) if variant != "Theta_plus_rminus1" else -np.inf)
        h = min(0.15, gap / 5)
    w, wt = _line_nodes(offset, rho, beta, h, fold)
    out = np.empty(v1.size, dtype=complex)
    if fold < MAX_FOLD:
        W = _weight_tensor(w, wt, fold)
        for s in range(0, v1.size, block):
            R = _ratio_factors(variant, v1[s:s + block], z1[s:s + block], w)
            out[s:s + block] = _contract(W, R)
    else:
        # peel the first fold to keep the dense tensor at rank 3
        W3 = _weight_tensor(w, wt, fold - 1)
        for s in range(0, v1.size, block):
            R = _ratio_factors(variant, v1[s:s + block], z1[s:s + block], w)
            acc = np.zeros(R.shape[0], dtype=complex)
            for k in range(w.size):
                lead = wt[k] * np.prod((w[k] - np.stack(np.meshgrid(w, w, w, indexing="ij"))) ** 2, axis=0)
                acc += R[:, k] * _contract(W3 * lead, R)
            out[s:s + block] = acc
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def _psi_tilde(r, u):
    """Hermite functions at -i sqrt2 u, shape (r, len(u))."""
    return hermite_functions_safe(r, -1j * SQRT2 * np.atleast_1d(np.asarray(u, dtype=complex)))


def theta_ratio(which, r, u, v, spec=None, offset=None):
    """Theta ratios at rho = beta = 0 through the GUE kernel K~_r.

    which='I'   : Theta_r(u, v) / Theta_r(0, 0)
    which='II'  : r Theta+_{r-1}(u, v) / Theta_r(0, 0)
    which='III' : -Theta-_{r+1}(u, v) / ((r + 1) Theta_r(0, 0))
    """
    if r < 1:
        raise InvalidParameterError("theta_ratio needs r >= 1")
    u = complex(u)
    v = complex(v)
    k = 2 * math.pi * SQRT2
    if which == "II":
        pu, pv = _psi_tilde(r, u), _psi_tilde(r, v)
        return complex(k * np.exp(-u * u - v * v) * np.sum(pu * pv))
    if offset is None:
        offset = max(0.7, max(u.real, v.real) + 0.5)
    line = C.vertical_line(offset, half_length=10.0)
    if which == "I":
        if u == v:
            return 1.0 + 0j
        pv = _psi_tilde(r, v)[:, 0]

        def f(z):
            return (pv @ _psi_tilde(r, z)) * np.exp(z * z - v * v) / (z - u) / (2j * math.pi)

        val, _ = C.integrate(f, line, spec)
        return complex(1 - k * (v - u) * val)
    if which == "III":
        first, _ = C.integrate(lambda w: np.exp(2 * w * w) / ((w - u) * (w - v)) / (2j * math.pi),
                               line, spec)
        A, _ = C.integrate(lambda w: _psi_tilde(r, w) * np.exp(w * w) / (w - v) / (2j * math.pi),
                           line, spec)
        B, _ = C.integrate(lambda z: _psi_tilde(r, z) * np.exp(z * z) / (z - u) / (2j * math.pi),
                           line, spec)
        return complex(-first + k * np.sum(A * B))
    raise InvalidParameterError("which must be 'I', 'II' or 'III'")


def theta_ratio_direct(which, r, u, v, **kw):
    """Left-hand sides of the ratio identities from :func:`theta_direct`."""
    t00 = theta_direct("Theta_r", r, 0, 0.0, 0.0, 0.0, **kw)
    if which == "I":
        return theta_direct("Theta_r", r, 0, 0.0, u, v, **kw) / t00
    if which == "II":
        return r * theta_direct("Theta_plus_rminus1", r, 0, 0.0, u, v, **kw) / t00
    if which == "III":
        return -theta_direct("Theta_minus_rplus1", r, 0, 0.0, u, v, **kw) / ((r + 1) * t00)
    raise InvalidParameterError("which must be 'I', 'II' or 'III'")


def z_integral(j, nodes=24):
    """int_{R^j} prod exp(-x_a^2) Delta_j(x)^2 dx by Gauss-Hermite tensor quadrature."""
    if j == 0:
        return 1.0
    if j > MAX_FOLD:
        raise UnsupportedSizeError(f"at most {MAX_FOLD} folds")
    x, wx = np.polynomial.hermite.hermgauss(nodes)
    W = _weight_tensor(x.astype(complex), wx.astype(complex), j)
    return float(W.sum().real)


def z_closed_form(j):
    """j! prod_{a<j} c_a^2 with c_a^2 = a! sqrt(pi) / 2^a."""
    out = float(math.factorial(j))
    for a in range(j):
        out *= math.factorial(a) * math.sqrt(math.pi) / 2 ** a
    return out


def theta00_closed_form(r):
    """Theta_r(0, 0) at rho = beta = 0 by rotating the line onto R."""
    return (1j / SQRT2) ** (r * r) * (2j * math.pi) ** (-r) * z_closed_form(r)
