"""Hexagon geometry with cuts and the parametric arctic curve.

The curve for cuts [a_i, b_i] on the top boundary (normalized so that the
cut lengths sum to 1) is

    P(w) = prod (w - b_i)/(w - a_i),   S(w) = sum 1/(w - b_i) - 1/(w - a_i),
    x(w) = w + (P - 1)/S,   y(w) = 1 - (P - 1)^2/(P S),   dy/dx = (1 - P)/P,

traced by real w.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, PoleProximityError

POLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# coordinates and hexagon bookkeeping

def coords_transform(n, x):
    """(n, x) -> (eta, xi) = (n + x + 1/2, n - x - 1/2)."""
    return n + x + 0.5, n - x - 0.5


def coords_inverse(eta, xi):
    """(eta, xi) -> (n, x) = ((eta + xi)/2, (eta - xi - 1)/2)."""
    return (eta + xi) / 2, (eta - xi - 1) / 2


@dataclass(frozen=True)
class HexGeometry:
    """Side lengths of the hexagon with two opposite cuts of size d."""

    b: float
    c: float
    d: float
    n1: float
    n2: float
    m1: float
    m2: float

    @property
    def r(self):
        return self.b - self.d

    @property
    def rho(self):
        return self.n1 - self.m1 + self.b - self.d

    @property
    def sigma(self):
        return self.m1 - self.n1 + self.c - self.d

    @property
    def N(self):
        return self.b + self.c

    def violations(self, tol=1e-9):
        """Names of the failed invariants (empty when the geometry is valid)."""
        out = []
        if min(self.b, self.c, self.d, self.n1, self.n2, self.m1, self.m2) < -tol:
            out.append("all sides nonnegative")
        if abs(self.m1 + self.m2 - self.n1 - self.n2) > tol:
            out.append("tilability m1 + m2 = n1 + n2")
        if self.b < self.d - tol or self.c < self.d - tol:
            out.append("b >= d and c >= d")
        if self.r < -tol:
            out.append("r = b - d >= 0")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise InvalidParameterError("invalid hexagon: " + "; ".join(bad))
        return self


@dataclass(frozen=True)
class GeometryScaling:
    """Scaling of the sides with d, keeping r and rho fixed."""

    gamma: float
    d: float
    beta1: float = 0.0
    beta2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0

    @property
    def a(self):
        return 2 * math.sqrt(self.gamma / (self.gamma - 1))

    @property
    def beta(self):
        return -self.beta1 - self.beta2


def geometry_from_scaling(g, r, rho=0):
    """Hexagon sides b = d + r, c = gamma d, m_i and n_i from the scaling.

    Examples
    --------
    >>> h = geometry_from_scaling(GeometryScaling(gamma=2.0, d=100.0), r=5)
    >>> (h.b, h.c, h.m1, h.n1, h.n2)
    (105.0, 200.0, 300.0, 295.0, 305.0)
    """
    if not 1 < g.gamma < 3:
        raise InvalidParameterError("gamma must lie in (1, 3)")
    if g.d < 1:
        raise InvalidParameterError("d must be >= 1")
    k = (g.gamma + 1) / (g.gamma - 1)
    sq = math.sqrt(g.d)
    m = [k * (g.d + 0.5 * g.a * bi * sq + gi)
         for bi, gi in ((g.beta1, g.gamma1), (g.beta2, g.gamma2))]
    n = [m[i] - (-1) ** (i + 1) * (rho - r) for i in range(2)]
    h = HexGeometry(b=g.d + r, c=g.gamma * g.d, d=g.d, n1=n[0], n2=n[1], m1=m[0], m2=m[1])
    bad = h.violations()
    if abs(h.rho - rho) > 1e-9 * max(1.0, abs(rho)):
        bad.append("recomputed rho equals input rho")
    if bad:
        raise InvalidParameterError("constraint violation: " + "; ".join(bad))
    return h


# ---------------------------------------------------------------------------
# cuts and the arctic curve

@dataclass(frozen=True)
class CutSet:
    a: tuple
    b: tuple

    @property
    def lengths(self):
        return tuple(bi - ai for ai, bi in zip(self.a, self.b))


def cuts_from_hexagon(n1, n2, d, b):
    """The three cuts in normalized units (b + c = 1).

    a1 = -n1 - b, b1 = -n1;  a2 = 0, b2 = d;  a3 = n2 + d, b3 = n2 + d + c'
    with c' = 1 - b - d.
    """
    if not (0 < b < 1 and 0 < d < 1 and b + d < 1):
        raise InvalidParameterError("need 0 < b, 0 < d and b + d < 1")
    cp = 1 - b - d
    a = (-n1 - b, 0.0, n2 + d)
    bb = (-n1, d, n2 + d + cp)
    for i in range(2):
        if bb[i] > a[i + 1]:
            raise InvalidParameterError("cut intervals overlap")
    return CutSet(a, bb)


def cuts_from_geometry(h):
    """Normalize an integer hexagon by N = b + c and build its cuts."""
    N = h.N
    return cuts_from_hexagon(h.n1 / N, h.n2 / N, h.d / N, h.b / N)


def _PS(w, cuts):
    P = np.ones_like(w)
    S = np.zeros_like(w)
    for ai, bi in zip(cuts.a, cuts.b):
        P = P * (w - bi) / (w - ai)
        S = S + 1 / (w - bi) - 1 / (w - ai)
    return P, S


def arctic_point(w, cuts):
    """(x, y, dy/dx) at parameter w; raises near the poles a_i, b_i."""
    poles = np.array(cuts.a + cuts.b)
    if np.min(np.abs(w - poles)) < POLE_TOL:
        raise PoleProximityError(f"w = {w} is within {POLE_TOL} of a cut endpoint")
    P, S = _PS(np.asarray(w, dtype=complex), cuts)
    x = w + (P - 1) / S
    y = 1 - (P - 1) ** 2 / (P * S)
    slope = (1 - P) / P
    conv = (lambda t: float(t.real)) if np.isrealobj(w) else complex
    return conv(x), conv(y), conv(slope)


def endpoint_limit(cuts, i, which="b"):
    """Exact (x, y) of the curve as w tends to b_i (vertical tangent) or a_i (slope -1).

    At b_i: P ~ kappa (w - b_i), so (x, y) -> (b_i, 1 - 1/kappa).
    At a_i: P ~ lam / (w - a_i), so (x, y) -> (a_i - lam, 1 + lam).
    """
    a, b = cuts.a, cuts.b
    if which == "b":
        w0 = b[i]
        k = 1 / (w0 - a[i])
        for j in range(len(a)):
            if j != i:
                k *= (w0 - b[j]) / (w0 - a[j])
        return w0, 1 - 1 / k
    w0 = a[i]
    lam = w0 - b[i]
    for j in range(len(a)):
        if j != i:
            lam *= (w0 - b[j]) / (w0 - a[j])
    return w0 - lam, 1 + lam


def tangency_gap(n1, n2, d, b):
    """1 - b2 - y(b2) = d (n2 b - (n1 + d) c') / ((n1 + d)(n2 + c'))."""
    cp = 1 - b - d
    return d * (n2 * b - (n1 + d) * cp) / ((n1 + d) * (n2 + cp))


def oblique_gap(n1, n2, d, b):
    """x(a2) - a2 - d = d (n1 c' - (n2 + d) b) / ((n1 + b)(n2 + d))."""
    cp = 1 - b - d
    return d * (n1 * cp - (n2 + d) * b) / ((n1 + b) * (n2 + d))


def classify_cusp(n1, n2, d, b):
    """'vertical_cusp' (i), 'oblique_cusp' (ii) or 'none'.

    (i) n2 b - n1 c' > d c';  (ii) n2 b - n1 c' < -d b;  strict inequalities.
    """
    if not (0 < b < 1 and 0 < d < 1 and b + d < 1):
        raise InvalidParameterError("need 0 < b, 0 < d and b + d < 1")
    cp = 1 - b - d
    q = n2 * b - n1 * cp
    if q > d * cp:
        return "vertical_cusp"
    if q < -d * b:
        return "oblique_cusp"
    return "none"


def regime_heuristic(gamma, r, d):
    """'cusp_airy_side' when r/d > 2 gamma/(gamma - 1), else 'transversal_side_undetermined'."""
    if not 1 < gamma < 3:
        raise InvalidParameterError("gamma must lie in (1, 3)")
    if d <= 0:
        raise InvalidParameterError("d must be positive")
    return "cusp_airy_side" if r / d > 2 * gamma / (gamma - 1) else "transversal_side_undetermined"


# ---------------------------------------------------------------------------
# sampling and export

@dataclass
class Curve:
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    slope: np.ndarray


def sample_curve(cuts, w_min, w_max, n=2001):
    """Sample the curve on a real w grid.

    Points within POLE_TOL of a pole are dropped, and a NaN row separates
    samples on opposite sides of a pole so the polyline breaks there.
    """
    if not w_max > w_min or n < 2:
        raise InvalidParameterError("need w_max > w_min and n >= 2")
    poles = np.sort(np.array(cuts.a + cuts.b))
    w = np.linspace(w_min, w_max, n)
    w = w[np.min(np.abs(w[:, None] - poles[None, :]), axis=1) >= POLE_TOL]
    side = np.searchsorted(poles, w)
    P, S = _PS(w.astype(float), cuts)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = w + (P - 1) / S
        y = 1 - (P - 1) ** 2 / (P * S)
        slope = (1 - P) / P
    rows = []
    for k in range(w.size):
        if k and side[k] != side[k - 1]:
            rows.append((np.nan,) * 4)
        rows.append((w[k], x[k], y[k], slope[k]))
    arr = np.array(rows, dtype=float)
    return Curve(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


def curve_to_csv(curve):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["w", "x", "y", "slope"])
    for row in zip(curve.w, curve.x, curve.y, curve.slope):
        wr.writerow([("nan" if math.isnan(v) else f"{v:.17g}") for v in row])
    return buf.getvalue()


def curve_to_svg(curve, cuts=None, width=800, height=400, x_range=None, y_range=(0.0, 1.0)):
    """Minimal SVG: the curve as one path (broken at NaN rows), cuts as red segments at y = 1."""
    finite = np.isfinite(curve.x) & np.isfinite(curve.y)
    if x_range is None:
        x_range = (float(np.min(curve.x[finite])), float(np.max(curve.x[finite])))
    (x0, x1), (y0, y1) = x_range, y_range

    def X(v):
        return (v - x0) / (x1 - x0) * width

    def Y(v):
        return (y1 - v) / (y1 - y0) * height

    parts = []
    pen = False
    for xv, yv in zip(curve.x, curve.y):
        inside = math.isfinite(xv) and math.isfinite(yv) and y0 - 1 <= yv <= y1 + 1
        if not inside:
            pen = False
            continue
        parts.append(f"{'L' if pen else 'M'}{X(xv):.3f},{Y(yv):.3f}")
        pen = True
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<path d="{" ".join(parts)}" fill="none" stroke="black" stroke-width="1"/>']
    if cuts is not None:
        for ai, bi in zip(cuts.a, cuts.b):
            lines.append(f'<line x1="{X(ai):.3f}" y1="{Y(1.0):.3f}" x2="{X(bi):.3f}" '
                         f'y2="{Y(1.0):.3f}" stroke="red" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
