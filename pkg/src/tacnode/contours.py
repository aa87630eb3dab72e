"""Integration contours in the complex plane and quadrature over them.

Closed circles and doubly infinite vertical lines use the trapezoid rule,
which is spectrally accurate for analytic periodic or rapidly decaying
integrands.  Contours with corners or finite endpoints (Airy wedges, rays,
indented lines) use composite Gauss-Legendre panels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, InvalidParameterError

GAUSS_ORDER = 16

KINDS = ("circle", "vertical_line", "airy_wedge", "real_ray", "indented_real_line")


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution and tolerance for :func:`integrate`.

    Parameters
    ----------
    nodes_per_unit : int
        Starting node density per unit of contour length.
    abs_tol : float
        Absolute tolerance on the change under node doubling.
    max_panels : int
        Number of node-density doublings allowed before giving up.
    rel_floor : float
        Roundoff floor: the tolerance is never below ``rel_floor`` times the
        quadrature sum of |f|, the best any rule can do in double precision
        when the integrand is large and the integral small.
    """

    nodes_per_unit: int = 8
    abs_tol: float = 1e-10
    max_panels: int = 7
    rel_floor: float = 1e-14

    def __post_init__(self):
        if self.nodes_per_unit < 4:
            raise InvalidParameterError("nodes_per_unit must be >= 4")
        if not self.abs_tol > 0:
            raise InvalidParameterError("abs_tol must be positive")
        if self.max_panels < 1:
            raise InvalidParameterError("max_panels must be positive")


@dataclass(frozen=True)
class Contour:
    """A parametrized path.

    Only the fields relevant to ``kind`` are used.  ``length`` is the half
    length of a vertical or indented line, the arm length of a wedge and the
    length of a ray.
    """

    kind: str
    center: complex = 0.0
    radius: float = 0.5
    offset: float = 0.7
    length: float = 10.0
    side: str = "left"
    arm_angle: float = 2 * math.pi / 3
    vertex: float | None = None
    start: float = 0.0
    sign: int = 1
    indent_side: str = "above"
    orientation: int = 1

    @property
    def bounded(self):
        return self.kind == "circle"

    def lengthened(self, factor=2.0):
        """Same contour with its truncation length multiplied by ``factor``."""
        return replace(self, length=self.length * factor)

    def reversed(self):
        """Same path traversed in the opposite direction."""
        return replace(self, orientation=-self.orientation)

    def rule(self, nodes_per_unit):
        """Quadrature nodes ``z`` and weights ``w`` with sum(f(z) w) ~ integral."""
        z, w = _RULES[self.kind](self, int(nodes_per_unit))
        return z, self.orientation * w

    def end_nodes(self, nodes_per_unit):
        """Indices of the three outermost nodes at each unbounded end."""
        z, _ = self.rule(nodes_per_unit)
        n = z.size
        if self.kind == "real_ray":
            return np.arange(n - 3, n)
        return np.r_[0:3, n - 3:n]


def make_contour(kind, **params):
    """Construct a :class:`Contour`, validating the parameters.

    Examples
    --------
    >>> make_contour("circle", radius=0.5).radius
    0.5
    """
    if kind not in KINDS:
        raise InvalidParameterError(f"unknown contour kind {kind!r}")
    c = Contour(kind=kind, **params)
    if kind == "circle" and not c.radius > 0:
        raise InvalidParameterError("circle radius must be positive")
    if kind != "circle" and not c.length > 0:
        raise InvalidParameterError("contour length must be positive")
    if kind == "airy_wedge":
        if c.side not in ("left", "right"):
            raise InvalidParameterError("wedge side must be 'left' or 'right'")
        if not 0 < c.arm_angle < math.pi:
            raise InvalidParameterError("arm angle must lie in (0, pi)")
    if kind == "real_ray" and c.sign not in (1, -1):
        raise InvalidParameterError("ray sign must be +1 or -1")
    if kind == "indented_real_line":
        if c.indent_side not in ("above", "below"):
            raise InvalidParameterError("indent side must be 'above' or 'below'")
        if not 0 < c.radius < c.length:
            raise InvalidParameterError("indent radius must be positive and below the half length")
    if c.orientation not in (1, -1):
        raise InvalidParameterError("orientation must be +1 or -1")
    return c


def circle(radius=0.5, center=0.0):
    """Counterclockwise circle, the small loop around a pole."""
    return make_contour("circle", radius=radius, center=center)


def vertical_line(offset=0.7, half_length=10.0):
    """Upward vertical line Re z = offset."""
    return make_contour("vertical_line", offset=offset, length=half_length)


def airy_wedge(side="left", arm_length=12.0, vertex=None, arm_angle=2 * math.pi / 3):
    """Upward oriented wedge with arms towards exp(+-i arm_angle) infinity.

    The right wedge is the mirror image of the left one in the imaginary axis.
    The vertex defaults to -1 (left) or +1 (right).
    """
    return make_contour("airy_wedge", side=side, length=arm_length, vertex=vertex,
                        arm_angle=arm_angle)


def real_ray(start=0.0, sign=1, length=20.0):
    """Ray from ``start`` towards ``sign`` infinity."""
    return make_contour("real_ray", start=start, sign=sign, length=length)


def indented_real_line(indent_radius=0.1, indent_side="above", half_length=10.0):
    """Real line passing the origin on a small semicircle above or below it."""
    return make_contour("indented_real_line", radius=indent_radius,
                        indent_side=indent_side, length=half_length)


@lru_cache(maxsize=None)
def _gauss(order):
    return np.polynomial.legendre.leggauss(order)


def gauss_panels(a, b, nodes_per_unit):
    """Composite Gauss-Legendre nodes and weights on [a, b].

    Panels have length 8 / nodes_per_unit, so doubling the density halves them.
    """
    npan = max(1, int(math.ceil(abs(b - a) * nodes_per_unit / 8)))
    x, w = _gauss(GAUSS_ORDER)
    edges = np.linspace(a, b, npan + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def _circle_rule(c, npu):
    n = max(16, int(math.ceil(2 * math.pi * c.radius * npu)))
    th = 2 * math.pi * np.arange(n) / n
    e = np.exp(1j * th)
    return c.center + c.radius * e, 1j * c.radius * e * (2 * math.pi / n)


def _line_rule(c, npu):
    h = 1.0 / npu
    m = int(math.ceil(c.length / h))
    t = h * np.arange(-m, m + 1)
    return c.offset + 1j * t, np.full(t.shape, 1j * h, dtype=complex)


def _wedge_rule(c, npu):
    if c.side == "left":
        vtx = -1.0 if c.vertex is None else c.vertex
        up, low = np.exp(1j * c.arm_angle), np.exp(-1j * c.arm_angle)
    else:
        vtx = 1.0 if c.vertex is None else c.vertex
        up, low = np.exp(1j * (math.pi - c.arm_angle)), np.exp(-1j * (math.pi - c.arm_angle))
    s, ws = gauss_panels(0.0, c.length, npu)
    # lower arm runs inwards, upper arm outwards
    z = np.concatenate([vtx + s[::-1] * low, vtx + s * up])
    w = np.concatenate([-ws[::-1] * low, ws * up])
    return z, w


def _ray_rule(c, npu):
    s, ws = gauss_panels(0.0, c.length, npu)
    return c.start + c.sign * s, c.sign * ws.astype(complex)


def _indented_rule(c, npu):
    rho, R = c.radius, c.length
    s, ws = gauss_panels(rho, R, npu)
    th, wth = gauss_panels(0.0, math.pi, npu)
    if c.indent_side == "above":
        ang = math.pi - th  # from pi down to 0
        zc = rho * np.exp(1j * ang)
        wc = -1j * zc * wth
    else:
        ang = math.pi + th  # from pi up to 2 pi
        zc = rho * np.exp(1j * ang)
        wc = 1j * zc * wth
    z = np.concatenate([-s[::-1], zc, s]).astype(complex)
    w = np.concatenate([ws[::-1], wc, ws]).astype(complex)
    return z, w


_RULES = {
    "circle": _circle_rule,
    "vertical_line": _line_rule,
    "airy_wedge": _wedge_rule,
    "real_ray": _ray_rule,
    "indented_real_line": _indented_rule,
}

DEFAULT_SPEC = QuadratureSpec()


def quadrature_sum(f, contour, nodes_per_unit, with_norm=False):
    """Apply a fixed rule; ``f`` maps a node array of shape (N,) to (..., N)."""
    z, w = contour.rule(nodes_per_unit)
    vals = np.asarray(f(z))
    if with_norm:
        return vals @ w, float(np.max(np.abs(vals) @ np.abs(w)))
    return vals @ w


def _tail(f, contour, npu):
    z, w = contour.rule(npu)
    idx = contour.end_nodes(npu)
    vals = np.asarray(f(z[idx])) * w[idx]
    return float(np.max(np.abs(vals))) if vals.size else 0.0


def integrate(f, contour, spec=None):
    """Integrate ``f`` along ``contour`` with node-doubling refinement.

    Parameters
    ----------
    f : callable
        Vectorized integrand; maps a complex array of shape (N,) to an array
        of shape (..., N).  Several integrals may be computed at once.
    contour : Contour
    spec : QuadratureSpec, optional

    Returns
    -------
    value : complex or ndarray
    err : float
        Magnitude of the change under the last doubling.

    Examples
    --------
    >>> v, e = integrate(lambda z: 1 / (2j * np.pi * z), circle(0.5))
    >>> abs(v - 1) < 1e-12
    True
    """
    spec = spec or DEFAULT_SPEC
    if not contour.bounded and _tail(f, contour, spec.nodes_per_unit) > spec.abs_tol / 10:
        contour = contour.lengthened()
        if _tail(f, contour, spec.nodes_per_unit) > spec.abs_tol / 10:
            raise AccuracyError(
                f"integrand does not decay on truncated {contour.kind}",
                estimate=_tail(f, contour, spec.nodes_per_unit))
    npu = spec.nodes_per_unit
    prev = quadrature_sum(f, contour, npu)
    err = math.inf
    for _ in range(spec.max_panels):
        npu *= 2
        cur, norm = quadrature_sum(f, contour, npu, with_norm=True)
        err = float(np.max(np.abs(cur - prev)))
        if err <= max(spec.abs_tol, spec.rel_floor * norm):
            return cur, err
        prev = cur
    raise AccuracyError(f"no convergence on {contour.kind} after {spec.max_panels} doublings",
                        value=prev, estimate=err)
