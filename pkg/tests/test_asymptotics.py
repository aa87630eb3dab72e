import csv
import io
import json
import math

import numpy as np
import pytest
from scipy.special import sici

from tacnode import asymptotics as A
from tacnode.errors import ExcludedSectorError, InvalidParameterError, RegionError

SLOPE_LO, SLOPE_HI = A.SLOPE_WINDOW


def test_scale_example():
    assert A.scale_coords(A.ScalingSpec(2, 1), 0.0) == 2.0
    assert A.scale_coords(A.ScalingSpec(2, -1), 0.0) == -2.0


@pytest.mark.parametrize("r,eps", [(1, 1), (17, -1), (128, 1)])
def test_scale_roundtrip(r, eps):
    s = A.ScalingSpec(r, eps)
    xp = np.linspace(-3, 3, 13)
    assert np.max(np.abs(A.unscale_coords(s, A.scale_coords(s, xp)) - xp)) < 1e-13


@pytest.mark.parametrize("r,eps", [(4, 1), (64, -1)])
def test_jacobian(r, eps):
    s = A.ScalingSpec(r, eps)
    h = 1e-5
    fd = (A.scale_coords(s, h) - A.scale_coords(s, -h)) / (2 * h)
    assert abs(fd - A.jacobian(s)) < 1e-9
    assert abs(A.jacobian(s) - eps / (math.sqrt(2) * r ** (1 / 6))) < 1e-15


def test_scaling_spec_validation():
    with pytest.raises(InvalidParameterError):
        A.ScalingSpec(0)
    with pytest.raises(InvalidParameterError):
        A.ScalingSpec(4, 2)


def test_prefactor():
    s = A.ScalingSpec(64, -1)
    assert A.prefactor(s, 2, 2) == 1
    assert abs(A.prefactor(s, 2, 0) - 64 ** (1 / 3)) < 1e-12
    assert abs(A.prefactor(A.ScalingSpec(64, 1), 1, 0) + 2) < 1e-12


def test_log_c_r():
    for r in (1, 10, 200):
        assert abs(A.log_c_r(r) - math.log((r / (2 * math.e)) ** (r / 2))) < 1e-9 * max(1, r)


def test_scaled_dtac_excluded():
    with pytest.raises(ExcludedSectorError):
        A.scaled_dtac(A.ScalingSpec(16), 1, 0.0, -1, 0.0)
    assert np.isfinite(A.scaled_dtac(A.ScalingSpec(16), 1, 0.0, -1, 0.0, allow_excluded=True))


@pytest.mark.parametrize("eps", [1, -1])
def test_convergence_default_point(eps):
    rep = A.convergence_study(1, 1, 0.5, -0.3, eps=eps)
    assert rep.monotone
    assert rep.abs_err[-1] < rep.abs_err[0]
    assert SLOPE_LO <= rep.slope <= SLOPE_HI


def test_sector_reduction_converges():
    # tau1 < 0 < tau2 runs through L0 + L2 only and still approaches the limit
    rep = A.convergence_study(-1, 1, 0.5, -0.3)
    assert rep.monotone and rep.abs_err[-1] < 0.05


def test_eps_limits_agree():
    a = A.convergence_study(0, 0, 0.5, -0.3, eps=1)
    b = A.convergence_study(0, 0, 0.5, -0.3, eps=-1)
    assert a.limit == b.limit
    assert abs(a.values[-1] - b.values[-1]) < 0.05


def test_report_formats():
    rep = A.convergence_study(1, 1, 0.5, -0.3, rs=(16, 32))
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["r", "value", "limit", "abs_err"]
    assert [int(r[0]) for r in rows[1:]] == [16, 32]
    d = json.loads(rep.to_json())
    assert d["schema"] == "tacnode.convergence/1"
    assert {"slope", "passed", "monotone", "abs_err"} <= set(d)


def test_loglog_slope_and_cauchy():
    rs = [16, 32, 64, 128]
    assert abs(A.loglog_slope(rs, [r ** (-1 / 3) for r in rs]) + 1 / 3) < 1e-12
    assert A.cauchy_check([1.0, 1.0001, 1.0002], 1e-3)
    assert not A.cauchy_check([1.0, 0.9, 1.0], 1e-3)


def test_excluded_sector_study_guard():
    with pytest.raises(InvalidParameterError):
        A.excluded_sector_study(1, 1)


def test_excluded_sector_not_cauchy():
    values, cauchy = A.excluded_sector_study()
    assert len(values) == 4 and not cauchy


# ---------------------------------------------------------------------------
# asymptotic statements

@pytest.mark.parametrize("which,kw", [
    ("D1", dict(tau=0)), ("D1", dict(tau=-1)), ("D2", dict(tau=0)), ("E", dict(tau=1)),
    ("L2", dict(tau1=0, tau2=0)), ("L2", dict(tau1=1, tau2=1)), ("L2", dict(tau1=0, tau2=-1)),
    ("L01", dict(tau1=1, tau2=0)), ("L01", dict(tau1=0, tau2=-1, xp1=-0.3, xp2=0.5)),
    ("LF", dict()), ("LF", dict(sigma1=2, sigma2=-1, eps=-1)),
])
def test_lemma_passes(which, kw):
    assert A.verify_lemma(which, **kw).passed


def test_d1_ratio_at_64():
    rep = A.verify_lemma("D1", rs=(64,), tau=0)
    assert abs(rep.ratio[0] - 1) < 0.1


@pytest.mark.parametrize("which,kw", [("D1", dict(tau=1)), ("D2", dict(tau=2)), ("E", dict(tau=2))])
def test_lemma_residual_shrinks(which, kw):
    rep = A.verify_lemma(which, rs=(16, 32, 64, 128, 256), **kw)
    dev = [abs(complex(x) - 1) for x in rep.ratio]
    assert all(b < a for a, b in zip(dev, dev[1:]))
    assert rep.residual_exponent < -0.18


def test_l01_at_32():
    rep = A.verify_lemma("L01", rs=(32,), tau1=2, tau2=0, xp1=0.4, xp2=-0.1)
    assert rep.ratio[0] < 1e-6


def test_lf_bound_at_32():
    rep = A.verify_lemma("LF", rs=(32,))
    assert abs(rep.lhs[0]) < math.exp(-16)


def test_lf_closed_vs_quadrature():
    for s1, s2, xi, xp in [(1, 0, 0.3, 0.5), (2, -1, -0.4, 1.0), (3, 1, 0.8, -0.7)]:
        for eps in (1, -1):
            a = A.lf_integral(s1, s2, xi, xp, eps, method="closed")
            b = A.lf_integral(s1, s2, xi, xp, eps, method="quadrature")
            assert abs(a - b) < 1e-10


@pytest.mark.parametrize("which,kw", [
    ("D1", dict(tau=1, u=0.5)), ("D2", dict(tau=-1)), ("E", dict(tau=0)),
    ("L2", dict(tau1=1, tau2=-1)), ("L01", dict(tau1=1, tau2=-1)), ("L01", dict(tau1=-1, tau2=1)),
])
def test_lemma_region_errors(which, kw):
    with pytest.raises(RegionError):
        A.verify_lemma(which, **kw)


def test_lemma_unknown():
    with pytest.raises(InvalidParameterError):
        A.verify_lemma("Q")


# ---------------------------------------------------------------------------
# oscillatory sector

def test_osc_i_alpha_zero():
    assert A.osc_i_pm(0, 0) == 0 and A.osc_i_pm(1, 0, -1) == 0


@pytest.mark.parametrize("alpha", [1, 2, 5])
def test_osc_i_no_pole(alpha):
    assert abs(A.osc_i_pm(0, alpha, 1) - A.osc_i_pm(0, alpha, -1)) < 1e-12


def test_osc_i_gaussian_oracle():
    # alpha = 2, k = 0: int exp(-y^2)(4y^2 - 2) dy = 0; k = -2: int y^2 exp(-y^2)(4y^2 - 2) = 2 sqrt(pi)
    assert abs(A.osc_i_pm(0, 2)) < 1e-13
    want = math.pi ** 0.25 * 2 * math.sqrt(math.pi) / (math.sqrt(8) * 2j * math.pi)
    assert abs(A.osc_i_pm(-2, 2) - want) < 1e-12


def test_osc_i_residue_jump():
    # H_3(y)/y^2 has residue -12 at 0; above minus below is -2 pi i times the residue
    jump = A.osc_i_pm(2, 3, 1) - A.osc_i_pm(2, 3, -1)
    assert abs(jump - (3 * math.pi / 2) ** 0.25 * 12 / math.sqrt(48)) < 1e-12


@pytest.mark.parametrize("k,alpha", [(1, 2), (2, 3), (3, 4)])
def test_osc_i_radius_independent(k, alpha):
    for sign in (1, -1):
        assert abs(A.osc_i_pm(k, alpha, sign, radius=0.05) - A.osc_i_pm(k, alpha, sign, radius=0.1)) < 1e-8


def test_osc_i_guard():
    with pytest.raises(InvalidParameterError):
        A.osc_i_pm(1, 61)
    with pytest.raises(InvalidParameterError):
        A.osc_i_pm(1, 2, sign=0)


def test_osc_constants_oracles():
    a, b, c, d = A.osc_constants(0)
    si, ci = sici(2.0)
    assert abs(b - (math.pi / 2 - si)) < 1e-10
    # int_2^inf cos u / u^2 = cos(2)/2 - int_2^inf sin u / u
    assert abs(d - math.sqrt(2) * (math.cos(2) / 2 - (math.pi / 2 - si))) < 1e-10
    # alpha = 0: a = sin(1/2) pi/2, c = i cos(1/2)/sqrt2 int_0^pi exp(-i t)/2 dt
    assert abs(a - math.pi / 2 * math.sin(0.5)) < 1e-12
    assert abs(c - 1j * math.cos(0.5) / math.sqrt(2) * (-1j)) < 1e-12


@pytest.mark.parametrize("alpha", range(0, 11))
def test_osc_constants_finite(alpha):
    assert all(np.isfinite(v) for v in A.osc_constants(alpha))


def test_osc_constants_guard():
    with pytest.raises(InvalidParameterError):
        A.osc_constants(11)


@pytest.mark.parametrize("ell", [1, 2, 3, 4, 7])
def test_osc_periodic(ell):
    for r in range(0, 60):
        assert A.osc_I(ell, r) == A.osc_I(ell, r + 16)


def test_osc_single_term():
    a1 = [A.osc_I(2, r) * A.osc_I(1, r - 1) - A.osc_I(2, r - 1) * A.osc_I(1, r) for r in (20, 27)]
    assert [A.osc_Osc(r, 1, -1) for r in (20, 27)] == a1


def test_osc_sector_guards():
    with pytest.raises(InvalidParameterError):
        A.osc_Osc(20, 1, 1)
    with pytest.raises(InvalidParameterError):
        A.osc_l13_l24(20, 0, tau2=-1)
    with pytest.raises(InvalidParameterError):
        A.osc_I(0, 20)


def test_oscillation_report_short():
    rep = A.oscillation_report(rs=range(20, 28))
    assert rep.periodic and rep.sign_changes > 0 and rep.hard_pass
    assert len(rep.direct) == len(rep.predicted) == 8
    assert all(np.isfinite(rep.direct))
