"""Edge scaling of the rho = beta = 0 kernel and its large-r behaviour.

Contents

* the scaling maps xi = eps (sqrt(2r) + xi'/(sqrt2 r^{1/6})) and the scaled
  kernel whose r -> infinity limit is the transversal cusp-Airy kernel;
* a convergence harness (CSV / JSON reports, fitted log-log slope, Cauchy
  check for the oscillatory sector);
* ratio checks for the individual asymptotic statements (D, E, L2, L01, LF);
* diagnostics for the oscillatory sector tau2 < 0 < tau1.
"""
from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad

from . import contours as C
from .dtac import dtac_rho0, l1_terms, l24, l2_contour
from .errors import ExcludedSectorError, InvalidParameterError, RegionError
from .limits import excluded, tcusp_kernel
from .special import SQRT2, SQRT_2PI, apply_D, gen_fn, hermite, hermite_scaled, phi

SADDLE_Z0 = 1 / SQRT2
RUNGS = (16, 32, 64, 128)
SLOPE_WINDOW = (-0.55, -0.18)
_TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# scaling maps

@dataclass(frozen=True)
class ScalingSpec:
    """Edge scaling at filament count r near the upper (eps=+1) or lower cut."""

    r: int
    eps: int = 1

    def __post_init__(self):
        if self.r < 1:
            raise InvalidParameterError("r must be >= 1")
        if self.eps not in (1, -1):
            raise InvalidParameterError("eps must be +1 or -1")

    @property
    def width(self):
        """sqrt2 r^{1/6}: one unit of xi' is 1/width units of xi."""
        return SQRT2 * self.r ** (1 / 6)


def scale_coords(s, xp):
    """xi = eps (sqrt(2r) + xi'/(sqrt2 r^{1/6}))."""
    return s.eps * (math.sqrt(2 * s.r) + np.asarray(xp) / s.width)


def unscale_coords(s, xi):
    """Inverse of :func:`scale_coords`."""
    return (s.eps * np.asarray(xi) - math.sqrt(2 * s.r)) * s.width


def jacobian(s):
    """d xi / d xi' = eps / (sqrt2 r^{1/6})."""
    return s.eps / s.width


def log_c_r(r):
    """log of c_r = (r / (2e))^{r/2}."""
    return 0.5 * r * (math.log(r / 2) - 1)


def prefactor(s, tau1, tau2):
    """(-eps r^{1/6})^{tau1 - tau2}; equals 1 on the diagonal tau1 = tau2."""
    return (-s.eps * s.r ** (1 / 6)) ** (tau1 - tau2)


def measure_factor(s):
    """J = |d theta / d xi'| = r^{-1/6} with theta = sqrt2 xi the kernel's own variable."""
    return s.r ** (-1 / 6)


def dtac_theta_density(r, tau1, xi1, tau2, xi2, spec=None):
    """L^dTac_{r,0,0}(tau1, sqrt2 xi1; tau2, sqrt2 xi2), from the xi-scale kernel."""
    return SQRT2 ** (tau1 - tau2) * dtac_rho0(r, tau1, xi1, tau2, xi2, spec) / SQRT2


def scaled_dtac(s, tau1, xp1, tau2, xp2, spec=None, allow_excluded=False):
    """(-eps r^{1/6})^{tau1-tau2} L^dTac_{r,0,0}(tau1, sqrt2 xi1; tau2, sqrt2 xi2) J.

    Converges to :func:`tcusp_kernel` as r -> infinity outside the sector
    tau2 < 0 < tau1.  ``allow_excluded`` evaluates inside that sector too
    (the finite-r kernel exists there; only the limit does not).
    """
    if excluded(tau1, tau2) and not allow_excluded:
        raise ExcludedSectorError("no limit for tau2 < 0 < tau1")
    x1 = float(scale_coords(s, xp1))
    x2 = float(scale_coords(s, xp2))
    val = prefactor(s, tau1, tau2) * dtac_theta_density(s.r, tau1, x1, tau2, x2, spec)
    return float(np.real(val * measure_factor(s)))


# ---------------------------------------------------------------------------
# convergence harness

def loglog_slope(rs, errs):
    """Least-squares slope of log err against log r (nan for fewer than two points)."""
    if len(rs) < 2:
        return float("nan")
    return float(np.polyfit(np.log(np.asarray(rs, float)), np.log(np.asarray(errs, float)), 1)[0])


def cauchy_check(values, tol):
    """True when every successive difference of the sequence is below ``tol``."""
    v = np.asarray(values, dtype=float)
    return bool(np.all(np.abs(np.diff(v)) < tol))


@dataclass
class ConvergenceReport:
    tau1: int
    tau2: int
    xp1: float
    xp2: float
    eps: int
    rs: list
    values: list
    limit: float
    abs_err: list = field(default_factory=list)
    slope: float = float("nan")
    monotone: bool = False
    slope_window: tuple = SLOPE_WINDOW

    @property
    def passed(self):
        lo, hi = self.slope_window
        return self.monotone and lo <= self.slope <= hi

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "value", "limit", "abs_err"])
        for r, v, e in zip(self.rs, self.values, self.abs_err):
            w.writerow([r, f"{v:.17g}", f"{self.limit:.17g}", f"{e:.17g}"])
        return buf.getvalue()

    def to_json(self):
        d = asdict(self)
        d["slope_window"] = list(self.slope_window)
        d["passed"] = self.passed
        d["schema"] = "tacnode.convergence/1"
        return json.dumps(d, indent=2, sort_keys=True)


def convergence_study(tau1, tau2, xp1, xp2, eps=1, rs=RUNGS, spec=None,
                      slope_window=SLOPE_WINDOW):
    """Distance of the scaled kernel from its limit over an r-ladder.

    Passes when the error decreases monotonically and the fitted log-log
    slope lies in ``slope_window``.
    """
    limit = tcusp_kernel(tau1, xp1, tau2, xp2)
    values = [scaled_dtac(ScalingSpec(r, eps), tau1, xp1, tau2, xp2, spec) for r in rs]
    errs = [abs(v - limit) for v in values]
    return ConvergenceReport(tau1, tau2, xp1, xp2, eps, list(rs), values, limit, errs,
                             loglog_slope(rs, errs), bool(np.all(np.diff(errs) < 0)),
                             tuple(slope_window))


def excluded_sector_study(tau1=1, tau2=-1, xp1=0.5, xp2=-0.3, eps=1, rs=RUNGS, tol=1e-3,
                          spec=None):
    """Scaled kernel values inside tau2 < 0 < tau1 and the Cauchy verdict.

    Returns (values, cauchy) where ``cauchy`` is True when all successive
    differences are below ``tol``.
    """
    if not excluded(tau1, tau2):
        raise InvalidParameterError("this study is for tau2 < 0 < tau1")
    values = [scaled_dtac(ScalingSpec(r, eps), tau1, xp1, tau2, xp2, spec, allow_excluded=True)
              for r in rs]
    return values, cauchy_check(values, tol)


# ---------------------------------------------------------------------------
# ratio checks for the individual asymptotic statements

LEMMAS = ("D1", "D2", "E", "L2", "L01", "LF")


@dataclass
class LemmaReport:
    which: str
    rs: list
    lhs: list
    rhs: list
    ratio: list
    residual_exponent: float
    passed: bool
    note: str = ""


def _airy_scaling(r, mu, xp):
    lam = SQRT2 * mu / r ** (1 / 6)
    xi = math.sqrt(2 * r) + xp / (SQRT2 * r ** (1 / 6))
    return lam, xi


def _saddle_point(r, u):
    return math.sqrt(r) * (SADDLE_Z0 + u / (SQRT2 * r ** (1 / 3)))


def _lhs_d1(r, tau, u, mu, xp, spec):
    lam, xi = _airy_scaling(r, mu, xp)
    z = _saddle_point(r, u)
    shift = r - log_c_r(r) + (mu + xp) * r ** (1 / 3)
    base = -r * np.log(z) + 0.5 * xi * xi - z * z + lam * z - shift

    def g(x):
        x = np.asarray(x, dtype=complex)
        return np.exp(base + 2 * x * z - 0.5 * x * x)

    if tau <= 0:
        n = -tau
        return complex((-1) ** n * hermite("probabilist", n, xi - 2 * z) * g(xi))
    return apply_D(-tau, xi, g, spec=spec)


def _rhs_d1(r, tau, u, mu, xp):
    a = mu + xp
    return complex(np.exp(-(u ** 3 / 3 - a * u)) * (SQRT2 * r ** (1 / 6) * u) ** (-tau))


def _lhs_d2(r, tau, v, mu, xp):
    lam, xi = _airy_scaling(r, mu, xp)
    w = _saddle_point(r, v)
    shift = log_c_r(r) - r - (mu + xp) * r ** (1 / 3)
    g = np.exp(r * np.log(w) - 0.5 * xi * xi + w * w - (lam + 2 * xi) * w + 0.5 * xi * xi - shift)
    # tau-th x-derivative of exp(x^2/2 - 2 x w) is i^tau He_tau((x - 2w)/i) times itself
    return complex((-1) ** tau * 1j ** tau * hermite("probabilist", tau, (xi - 2 * w) / 1j) * g)


def _rhs_d2(r, tau, v, mu, xp):
    a = mu + xp
    return complex(np.exp(v ** 3 / 3 - a * v) * (SQRT2 * r ** (1 / 6) * v) ** tau)


def _lhs_e(r, tau, mu, xp, spec):
    """2 oint dz/(2 pi i) E^{-tau}[z^{-r} e^{lam z} f(-i v, i z)/sqrt2], normalized by c_r^{-1} e^{mu r^{1/3}}.

    The z-integral is exact: oint z^{-r} exp(z^2 + b z) dz/(2 pi i)
    = i^{r-1} H_{r-1}(-i b/2)/(r-1)!, b = lam + 2v.
    """
    lam, xi = _airy_scaling(r, mu, xp)
    shift = -log_c_r(r) + mu * r ** (1 / 3)
    line = C.vertical_line(0.7, half_length=math.sqrt(2 * r + 1) + 10.0)

    def f(v):
        m, lg = hermite_scaled("physicist", r - 1, -1j * (0.5 * lam + v))
        herm = m * np.exp(lg + v * v - math.lgamma(r) - shift) * 1j ** (r - 1)
        return 2 * gen_fn("F", tau, xi, v) * herm / (SQRT_2PI * 1j * v ** tau)

    val, _ = C.integrate(f, line, spec)
    return complex((-1) ** (1 - tau) * val)


def _rhs_e(r, tau, mu, xp):
    return (mu + xp) ** (tau - 1) / ((SQRT2 * r ** (1 / 6)) ** (tau - 1) * math.factorial(tau - 1))


def _scaled_piece(r, eps, tau1, xp1, tau2, xp2, piece, spec):
    s = ScalingSpec(r, eps)
    x1 = float(scale_coords(s, xp1))
    x2 = float(scale_coords(s, xp2))
    if piece == "L2":
        val = l2_contour(r, tau1, x1, tau2, x2, spec)
    else:
        l0 = -(heaviside(tau1 - tau2, x2 - x1))
        val = l0 + complex(np.sum(l1_terms(tau1, x1, tau2, x2, spec)))
    return float(np.real((-eps * s.width) ** (tau1 - tau2) * val / s.width))


def heaviside(m, z):
    if m < 1 or z < 0:
        return 0.0
    return z ** (m - 1) / math.factorial(m - 1)


def l01_limit(tau1, xp1, tau2, xp2):
    """The primed Heaviside expression approached by L0 + L1."""
    m = tau1 - tau2
    if 0 <= tau2 < tau1 and xp1 >= xp2:
        return -heaviside(m, xp1 - xp2)
    if tau2 < tau1 <= 0 and xp2 >= xp1:
        return (-1) ** (m - 1) * heaviside(m, xp2 - xp1)
    return 0.0


def lf_integral(sigma1, sigma2, xi, xp, eps=1, spec=None, method="closed"):
    """oint_{L_{-eps}} exp(v^2/2 + xi' v) F^xi_{sigma1}(v) dv / (2 pi i v^{sigma1 - sigma2}).

    ``method='closed'`` expands F and uses the closed forms of Phi after
    v = sqrt2 u; ``method='quadrature'`` integrates along the line (its
    roundoff floor is far above the true value once xi' is large).
    """
    if sigma1 < 1:
        return 0j
    k = sigma1 - sigma2
    if method == "closed":
        total = 0.0
        for ell in range(sigma1):
            c = hermite("probabilist", ell, -xi).real / math.factorial(ell)
            total += c * SQRT2 ** (ell - k + 1) * phi(k - ell - 1, xp / SQRT2, -eps)
        return complex(total)
    line = C.vertical_line(-eps * 0.7, half_length=abs(xp) + 12.0)
    val, _ = C.integrate(lambda v: np.exp(0.5 * v * v + xp * v) * gen_fn("F", sigma1, xi, v)
                         / (_TWO_PI_I * v ** k), line, spec)
    return complex(val)


def _residual_exponent(rs, ratios):
    dev = np.abs(np.asarray(ratios) - 1)
    if np.any(dev == 0):
        return -math.inf
    return loglog_slope(rs, dev)


def verify_lemma(which, rs=RUNGS, spec=None, **inputs):
    """Left side against the leading term of the right side over an r-ladder.

    Parameters
    ----------
    which : {'D1', 'D2', 'E', 'L2', 'L01', 'LF'}
    rs : sequence of int
    inputs : keyword parameters of the statement
        D1: tau, u, mu, xp;  D2: tau, v, mu, xp;  E: tau, mu, xp;
        L2 / L01: tau1, xp1, tau2, xp2, eps;  LF: sigma1, sigma2, eps.

    For D1, D2, E and L2 the check passes when the last ratio is within 0.1
    of 1 and the fitted exponent of |ratio - 1| is at most -0.25.  L01
    passes when every difference is below 1e-6; LF when every value is
    below exp(-r/2).
    """
    rs = list(rs)
    if which == "D1":
        tau, u = inputs.get("tau", 0), complex(inputs.get("u", -0.5 + 0.3j))
        mu, xp = inputs.get("mu", 0.2), inputs.get("xp", 0.3)
        if tau > 0 and u.real >= 0:
            raise RegionError("tau > 0 requires Re u < 0")
        lhs = [_lhs_d1(r, tau, u, mu, xp, spec) for r in rs]
        rhs = [_rhs_d1(r, tau, u, mu, xp) for r in rs]
    elif which == "D2":
        tau, v = inputs.get("tau", 0), complex(inputs.get("v", 0.5 + 0.3j))
        mu, xp = inputs.get("mu", 0.2), inputs.get("xp", 0.3)
        if tau < 0:
            raise RegionError("tau < 0: the antiderivative of 1/f diverges; the statement is formal there")
        lhs = [_lhs_d2(r, tau, v, mu, xp) for r in rs]
        rhs = [_rhs_d2(r, tau, v, mu, xp) for r in rs]
    elif which == "E":
        tau, mu, xp = inputs.get("tau", 1), inputs.get("mu", 0.2), inputs.get("xp", 0.3)
        if tau < 1:
            raise RegionError("the E part vanishes identically for tau <= 0")
        lhs = [_lhs_e(r, tau, mu, xp, spec) for r in rs]
        rhs = [_rhs_e(r, tau, mu, xp) for r in rs]
    elif which in ("L2", "L01"):
        t1, t2 = inputs.get("tau1", 0), inputs.get("tau2", 0)
        x1, x2 = inputs.get("xp1", 0.5), inputs.get("xp2", -0.3)
        eps = inputs.get("eps", 1)
        if excluded(t1, t2):
            raise RegionError("not valid for tau2 < 0 < tau1")
        lhs = [_scaled_piece(r, eps, t1, x1, t2, x2, which, spec) for r in rs]
        if which == "L2":
            lim = tcusp_kernel(t1, x1, t2, x2) - l01_limit(t1, x1, t2, x2)
        else:
            if not ((t1 >= 0 and t2 >= 0) or (t1 <= 0 and t2 <= 0)):
                raise RegionError("L01 statement covers tau1, tau2 >= 0 or tau1, tau2 <= 0")
            lim = l01_limit(t1, x1, t2, x2)
        rhs = [lim] * len(rs)
    elif which == "LF":
        s1, s2, eps = inputs.get("sigma1", 1), inputs.get("sigma2", 0), inputs.get("eps", 1)
        lhs = [lf_integral(s1, s2, eps * math.sqrt(2 * r), eps * math.sqrt(2 * r), eps, spec)
               for r in rs]
        rhs = [math.exp(-r) for r in rs]
        ratio = [abs(a) / b for a, b in zip(lhs, rhs)]
        ok = all(abs(a) < math.exp(-r / 2) for a, r in zip(lhs, rs))
        return LemmaReport(which, rs, lhs, rhs, ratio, float("nan"), ok,
                           "ratio is |LHS| exp(xi'^2/2); pass iff |LHS| < exp(-r/2)")
    else:
        raise InvalidParameterError(f"unknown statement {which!r}; choose from {LEMMAS}")
    if which == "L01":
        diff = [abs(a - b) for a, b in zip(lhs, rhs)]
        return LemmaReport(which, rs, lhs, rhs, diff, float("nan"), all(d < 1e-6 for d in diff),
                           "ratio column holds |LHS - RHS|")
    ratio = [complex(a) / complex(b) for a, b in zip(lhs, rhs)]
    expo = _residual_exponent(rs, ratio)
    ok = abs(ratio[-1] - 1) < 0.1 and expo <= -0.25
    return LemmaReport(which, rs, lhs, rhs, ratio, expo, ok)


# ---------------------------------------------------------------------------
# oscillatory sector

def osc_i_pm(k, alpha, sign=1, radius=0.1, spec=None):
    """I^{+-}_k(alpha) = (pi alpha/2)^{1/4} int_{R+-} exp(-y^2) H_alpha(y) / (sqrt(2^alpha alpha!) 2 pi i y^k) dy.

    The line passes the origin on a semicircle above (sign=+1) or below.
    """
    if not 0 <= alpha <= 60:
        raise InvalidParameterError("alpha must lie in 0..60")
    if alpha == 0:
        return 0j
    if sign not in (1, -1):
        raise InvalidParameterError("sign must be +1 or -1")
    line = C.indented_real_line(radius, "above" if sign == 1 else "below",
                                math.sqrt(2 * alpha + 1) + 10.0)
    norm = 0.5 * (alpha * math.log(2) + math.lgamma(alpha + 1))

    def f(y):
        m, lg = hermite_scaled("physicist", alpha, y)
        return m * np.exp(lg - y * y - norm) / (_TWO_PI_I * y ** k)

    val, _ = C.integrate(f, line, spec)
    return complex((math.pi * alpha / 2) ** 0.25 * val)


def _cquad(f, a, b):
    re = quad(lambda t: f(t).real, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    im = quad(lambda t: f(t).imag, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    return complex(re, im)


@functools.lru_cache(maxsize=None)
def osc_constants(alpha):
    """(a, b, c, d) of the periodic description; a and c may be complex.

    b and d are oscillatory tails on [2, inf), integrated with QUADPACK's
    Fourier-weight routine.
    """
    if not 0 <= alpha <= 10:
        raise InvalidParameterError("alpha must lie in 0..10")
    a = 2.0 ** -alpha * _cquad(lambda t: 0.5 * np.exp(-2j * alpha * t)
                               * np.sin(np.exp(1j * alpha * t) / 2), 0.0, math.pi)
    c = 1j * 2.0 ** -alpha / SQRT2 * _cquad(lambda t: 0.5 * np.exp(-(2 * alpha + 1) * 1j * t)
                                            * np.cos(np.exp(1j * alpha * t) / 2), 0.0, math.pi)
    b = 2.0 ** alpha * quad(lambda u: u ** -(1 + 2 * alpha), 2, np.inf, weight="sin", wvar=1.0)[0]
    d = 2.0 ** alpha * SQRT2 * quad(lambda u: u ** -(2 + 2 * alpha), 2, np.inf,
                                    weight="cos", wvar=1.0)[0]
    return a, b, c, d


def osc_I(ell, r):
    """I_ell(r): a sin(r pi/8) - b sin(r pi/2) for odd ell, c cos(r pi/8) - d cos(r pi/2) for even."""
    if ell < 1:
        raise InvalidParameterError("ell must be >= 1")
    alpha = (ell - 1) // 2
    a, b, c, d = osc_constants(alpha)
    q = int(r) % 16  # both phases are 16-periodic in integer r
    if ell % 2 == 1:
        return a * math.sin(q * math.pi / 8) - b * math.sin(q * math.pi / 2)
    return c * math.cos(q * math.pi / 8) - d * math.cos(q * math.pi / 2)


def osc_Osc(r, tau1, tau2):
    """O_sc^{(r)}(tau1, -tau2) built from the periodic I_ell."""
    if not excluded(tau1, tau2):
        raise InvalidParameterError("defined for tau2 < 0 < tau1")
    total = 0j
    for m in range(tau1):
        for ell in range(-tau2):
            coef = ((1j / SQRT2) ** (m + ell) * (-1) ** m
                    / (math.factorial(tau1 - 1 - m) * math.factorial(-tau2 - 1 - ell)))
            for s in range(ell + 1):
                total += coef * (osc_I(2 + m + s, r) * osc_I(1 + ell - s, r - 1)
                                 - osc_I(2 + m + s, r - 1) * osc_I(1 + ell - s, r))
    return total


def osc_predicted(r, tau1, tau2):
    """(-1)^tau1 (sqrt(2r))^{tau1 - tau2 - 1} O_sc / pi^2."""
    return ((-1) ** tau1 * math.sqrt(2 * r) ** (tau1 - tau2 - 1) * osc_Osc(r, tau1, tau2)
            / math.pi ** 2)


def osc_l13_l24(r, tau1, xi1=None, tau2=-1, xi2=None, spec=None):
    """L13+ + L24 at finite r (xi defaults to sqrt(2r))."""
    if not excluded(tau1, tau2):
        raise InvalidParameterError("defined for tau2 < 0 < tau1")
    xi1 = math.sqrt(2 * r) if xi1 is None else xi1
    xi2 = math.sqrt(2 * r) if xi2 is None else xi2
    l13 = l1_terms(tau1, xi1, tau2, xi2, spec)[2]
    return float(np.real(l13 + l24(r, tau1, xi1, tau2, xi2, spec=spec)))


@dataclass
class OscillationReport:
    rs: list
    direct: list
    predicted: list
    sign_changes: int
    correlation: float
    periodic: bool

    @property
    def hard_pass(self):
        return self.sign_changes > 0 and self.periodic

    @property
    def soft_pass(self):
        return bool(abs(self.correlation) >= 0.5)


def oscillation_report(tau1=1, tau2=-1, rs=range(20, 53), spec=None):
    """Direct L13+ + L24 against the periodic prediction.

    ``correlation`` is the Pearson correlation between the sign sequence of
    the direct values and the predicted values (nan if either is constant).
    """
    rs = list(rs)
    direct = [osc_l13_l24(r, tau1, tau2=tau2, spec=spec) for r in rs]
    pred = [float(np.real(osc_predicted(r, tau1, tau2))) for r in rs]
    sg = np.sign(direct)
    changes = int(np.sum(sg[1:] != sg[:-1]))
    if np.std(sg) == 0 or np.std(pred) == 0:
        corr = float("nan")
    else:
        corr = float(np.corrcoef(sg, pred)[0, 1])
    periodic = all(osc_I(ell, r) == osc_I(ell, r + 16) for ell in (1, 2, 3, 4) for r in rs)
    return OscillationReport(rs, direct, pred, changes, corr, periodic)
