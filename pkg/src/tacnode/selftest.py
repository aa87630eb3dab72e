"""A fast invariant suite touching every module; used by ``tacnode selftest``."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite

from . import arctic, asymptotics, dtac, gue, limits, special, theta


@dataclass
class CheckResult:
    name: str
    passed: bool
    error: float
    tol: float
    seconds: float


def _hermite_orthogonality():
    x, w = np.polynomial.hermite.hermgauss(40)
    H = np.array([special.hermite("physicist", j, x).real for j in range(9)])
    G = (H * w) @ H.T
    exact = np.diag([math.sqrt(math.pi) * 2 ** j * math.factorial(j) for j in range(9)])
    return float(np.max(np.abs(G - exact) / np.sqrt(np.outer(np.diag(exact), np.diag(exact)))))


def _hermite_scale():
    x = np.linspace(-3, 3, 13)
    return max(float(np.max(np.abs(special.hermite("probabilist", j, x)
                                   - 2 ** (-j / 2) * eval_hermite(j, x / math.sqrt(2)))))
               / max(1.0, float(np.max(np.abs(eval_hermite(j, x / math.sqrt(2))))))
               for j in range(21))


def _phi_reflection():
    return max(abs(special.phi(k, e, -1) - (-1) ** (k + 1) * special.phi(k, -e, 1))
               for k in range(-2, 4) for e in (-1.0, 0.0, 2.0))


def _f_plus_e():
    v = np.array([0.3 + 0.2j, -1.1 + 0.5j, 0.8j])
    err = 0.0
    for tau in range(-2, 13):
        s = special.gen_fn("F", tau, 0.7, v) + special.gen_fn("E", tau, 0.7, v)
        err = max(err, float(np.max(np.abs(s - np.exp(-v * v / 2 - 0.7 * v)))))
    return err


def _gue_symmetry():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=(2, 5))
    err = 0.0
    for n in range(1, 7):
        for a, b in zip(x, y):
            k = gue.gue_kernel(n, a, b)
            err = max(err, abs(k - gue.gue_kernel(n, b, a)), abs(k - gue.gue_kernel(n, -a, -b)))
    return err


def _gue_eigenfunction():
    t, w = np.polynomial.hermite.hermgauss(60)
    err = 0.0
    for n in (1, 3, 6):
        for s in (0.0, 1.2):
            # int K_n(s, t) exp(-t^2/2) dt with weight exp(-t^2) absorbed
            val = np.sum(w * np.array([gue.gue_kernel(n, s, ti) for ti in t]) * np.exp(t * t / 2))
            err = max(err, abs(val - math.exp(-s * s / 2)))
    return err


def _gue_double_fourier():
    return max(abs(gue.gue_double_fourier(3, a, b) - gue.gue_kernel(3, a, -b))
               for a in (-0.5, 0.4) for b in (0.3, 1.1))


def _theta_ratio_ii():
    u, v = 0.2j, -0.1j
    return abs(theta.theta_ratio("II", 2, u, v) / theta.theta_ratio_direct("II", 2, u, v) - 1)


def _dtac_two_routes():
    r, t1, x1, t2, x2 = 2, 0, 0.3, 0, -0.5
    return abs(dtac.l2_contour(r, t1, x1, t2, x2) - dtac.l2_operator_form(r, t1, x1, t2, x2))


def _dtac_involution():
    a = dtac.dtac_rho0(3, 2, 0.4, -1, -0.2)
    b = dtac.dtac_rho0(3, 1, 0.2, -2, -0.4)
    return abs(a - b)


def _tcusp_involution():
    a = limits.tcusp_kernel(1, 0.3, 0, -0.2)
    b = limits.tcusp_kernel(0, -0.2, -1, 0.3)
    return abs(a + b)


def _cusp_airy():
    return abs(limits.cusp_kernel(0, 0.3, 0, -0.2) - limits.airy_kernel(0.3, -0.2))


def _scaling_roundtrip():
    s = asymptotics.ScalingSpec(17, -1)
    xp = np.linspace(-2, 2, 9)
    return float(np.max(np.abs(asymptotics.unscale_coords(s, asymptotics.scale_coords(s, xp)) - xp)))


def _osc_periodic():
    bad = sum(asymptotics.osc_I(ell, r) != asymptotics.osc_I(ell, r + 16)
              for ell in (1, 2, 3, 4) for r in range(20, 53))
    return float(bad)


def _arctic_cases():
    ok = (arctic.classify_cusp(2, 8, 1 / 3, 1 / 4) == "vertical_cusp"
          and arctic.classify_cusp(8, 2, 1 / 3, 1 / 4) == "oblique_cusp")
    return 0.0 if ok else 1.0


def _arctic_tangents():
    c = arctic.cuts_from_hexagon(2, 8, 1 / 3, 1 / 4)
    err = 0.0
    for ai, bi in zip(c.a, c.b):
        err = max(err, abs(arctic.arctic_point(ai + 1e-7, c)[2] + 1))
        err = max(err, 1 / abs(arctic.arctic_point(bi + 1e-7, c)[2]))
    return err


CHECKS = [
    ("special.hermite_orthogonality", _hermite_orthogonality, 1e-8),
    ("special.probabilist_scale", _hermite_scale, 1e-8),
    ("special.phi_reflection", _phi_reflection, 1e-8),
    ("special.f_plus_e", _f_plus_e, 1e-8),
    ("gue.symmetries", _gue_symmetry, 1e-12),
    ("gue.eigenfunction", _gue_eigenfunction, 1e-8),
    ("gue.double_fourier", _gue_double_fourier, 1e-12),
    ("theta.ratio_II", _theta_ratio_ii, 1e-5),
    ("dtac.l2_two_routes", _dtac_two_routes, 1e-5),
    ("dtac.involution", _dtac_involution, 1e-7),
    ("limits.tcusp_involution", _tcusp_involution, 1e-7),
    ("limits.cusp_vs_airy_kernel", _cusp_airy, 1e-7),
    ("asymptotics.scaling_roundtrip", _scaling_roundtrip, 1e-12),
    ("asymptotics.osc_periodicity", _osc_periodic, 0.5),
    ("arctic.classify", _arctic_cases, 0.5),
    ("arctic.tangents", _arctic_tangents, 1e-3),
]


def run(checks=None):
    """Run the suite and return a list of :class:`CheckResult`."""
    out = []
    for name, fn, tol in (checks or CHECKS):
        t = time.perf_counter()
        try:
            err = float(fn())
        except Exception:  # a crashing check is a failing check
            err = float("inf")
        out.append(CheckResult(name, bool(err <= tol), err, tol, time.perf_counter() - t))
    return out
