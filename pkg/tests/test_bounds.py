"""Bound tests: frozen high-precision values for every closed form, the
root-finder residual contract, and quadrature cross-checked against an
independent integrator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ordstat import bounds as bd
from ordstat.distributions import Exponential, GPD, u_tilde
from ordstat.errors import DomainError, InputError, PreconditionError, RangeError
from ordstat.estimators import McEstimate
from ordstat.renyi import harmonic_number


def _mc(value, stderr=0.0, reps=1000):
    return McEstimate(value=value, stderr=stderr, replicates=reps)


# ---------------------------------------------------------------- kernels

def test_kernels_examples():
    assert bd.kernels(0.0) == (0.0, 0.0)
    tau, psi = bd.kernels(1.0)
    assert abs(tau - (math.e - 2.0)) < 1e-15
    assert abs(psi - 1.0) < 1e-15
    tau, psi = bd.kernels(-1.0)
    assert abs(tau - 1.0 / math.e) < 1e-15
    assert abs(psi - (1.0 - 2.0 / math.e)) < 1e-15


def test_kernels_overflow_guard():
    with pytest.raises(RangeError):
        bd.kernels(701.0)
    with pytest.raises(InputError):
        bd.kernels(math.nan)


@given(st.floats(-700, 700))
@settings(max_examples=100, deadline=None)
def test_kernel_signs(x):
    tau, psi = bd.kernels(x)
    assert tau >= 0.0
    if x >= 0.0:
        assert psi >= 0.0


# ---------------------------------------------------- spacing-driven bounds

def test_efron_stein_spacing_bound_branches():
    b = bd.efron_stein_spacing_bound(20, 4, _mc(2.0 / 16.0))
    assert abs(b.value - 0.5) < 1e-15          # k E[Delta^2] = 2/k at E[Delta^2] = 2/k^2
    b = bd.efron_stein_spacing_bound(4, 3, _mc(0.5, stderr=0.1))
    assert b.value == 2.0 * 0.5                # (n - k + 1) factor above the median
    assert b.stderr == 2.0 * 0.1
    assert bd.efron_stein_spacing_bound(10, 5, _mc(0.0)).value == 0.0
    with pytest.raises(InputError):
        bd.efron_stein_spacing_bound(10, 10, _mc(1.0))


def test_hazard_variance_bound_branches():
    e = Exponential()
    assert abs(bd.hazard_variance_bound(e, 20, 5, _mc(1.0)).value - 0.4) < 1e-15
    v = bd.hazard_variance_bound(e, 10, 8, _mc(1.0)).value
    assert abs(v - 2.0 * 3.0 / 49.0) < 1e-15
    with pytest.raises(PreconditionError):
        bd.hazard_variance_bound(GPD(1.0), 10, 2, _mc(1.0))


def test_logmgf_bound_trivials_and_errors():
    assert bd.exp_efron_stein_logmgf_bound(3, 0.0, [0.5, 1.0]).value == 0.0
    assert bd.exp_efron_stein_logmgf_bound(3, 1.0, [0.0, 0.0]).value == 0.0
    with pytest.raises(InputError):
        bd.exp_efron_stein_logmgf_bound(3, -0.1, [0.5])
    with pytest.raises(InputError):
        bd.exp_efron_stein_logmgf_bound(3, 1.0, [-0.5])
    with pytest.raises(RangeError):
        bd.exp_efron_stein_logmgf_bound(3, 10.0, [100.0])


def test_logmgf_bound_jackknife_form_identity():
    # the bound written through spacings equals the same expression written
    # through the jackknife estimate: sqrt(V_k / k) recovers Delta_k exactly
    gaps = np.array([0.0, 0.3, 1.7, 2.4])
    k, lam = 3, 0.8
    direct = bd.exp_efron_stein_logmgf_bound(k, lam, gaps)
    vk = k * gaps ** 2
    via_vk = bd.exp_efron_stein_logmgf_bound(k, lam, np.sqrt(vk / k))
    assert abs(direct.value - via_vk.value) < 1e-12 * direct.value


def test_variance_bounds_agree_for_exponential():
    # with a unit hazard the two bounds share the target 2/k; their Monte
    # Carlo estimates must agree within 3 combined standard errors
    from ordstat.estimators import mean_inv_hazard_sq, mean_sq_spacing

    e = Exponential()
    for n, k in ((20, 5), (50, 10)):
        msq = mean_sq_spacing(e, n, k, 50_000, 31415)
        es = bd.efron_stein_spacing_bound(n, k, msq)
        ih = mean_inv_hazard_sq(e, n, k, 50_000, 31415)
        hz = bd.hazard_variance_bound(e, n, k, ih)
        gap = abs(es.value - hz.value)
        assert gap <= 3.0 * math.hypot(es.stderr, hz.stderr)
        assert abs(hz.value - 2.0 / k) < 1e-15


def test_logmgf_bound_exponential_closed_form():
    # for Delta ~ Exp(k): lam (k/2) E[Delta (e^{lam Delta}-1)]
    #                   = lam (k^2/2) (1/(k-lam)^2 - 1/k^2); 1.5 at k=2, lam=1
    oracle, err = quad(lambda x: 2.0 * np.exp(-2.0 * x) * x * np.expm1(x), 0, 60.0)
    assert err < 1e-8
    assert abs(1.0 * (2.0 / 2.0) * oracle - 1.5) < 1e-8
    rng = np.random.default_rng(7)
    gaps = rng.exponential(scale=0.5, size=200_000)
    b = bd.exp_efron_stein_logmgf_bound(2, 1.0, gaps)
    assert abs(b.value - 1.5) < 3.0 * b.stderr


# ------------------------------------------------------------- evt limits

def test_evt_limits_at_zero_exact():
    lim = bd.evt_limits(0.0)
    assert abs(lim.spacing_limit - 2.0) < 1e-12
    assert abs(lim.variance_limit - math.pi ** 2 / 6.0) < 1e-12
    assert abs(lim.ratio - 12.0 / math.pi ** 2) < 1e-12


def test_evt_limits_frozen_values():
    lim = bd.evt_limits(-1.0)
    assert abs(lim.spacing_limit - 2.0) < 1e-12
    assert abs(lim.variance_limit - 1.0) < 1e-12
    assert abs(lim.ratio - 2.0) < 1e-12
    lim = bd.evt_limits(0.25)
    assert abs(lim.spacing_limit - 4.726543602414710) < 1e-11
    assert abs(lim.variance_limit - 4.332924099598181) < 1e-11
    assert abs(lim.ratio - 1.090843849042505) < 1e-12


def test_evt_limits_continuity_near_zero():
    base = bd.evt_limits(0.0)
    gaps = []
    for g in (1e-3, 1e-4):
        worst = max(
            abs(bd.evt_limits(s * g).spacing_limit - base.spacing_limit)
            + abs(bd.evt_limits(s * g).variance_limit - base.variance_limit)
            for s in (+1.0, -1.0))
        gaps.append(worst)
    assert gaps[0] < 0.02
    assert gaps[1] < 0.002
    assert gaps[1] < gaps[0]


def test_evt_ratio_growth_for_negative_gamma():
    # the Gamma-function algebra gives ratio -> 2 a^2/(1+a) with a = -gamma,
    # i.e. growth like -2 gamma (the frozen value at gamma = -20 included)
    assert abs(bd.evt_limits(-20.0).ratio - 38.09523809551445) < 1e-8
    for g in (-10.0, -20.0):
        a = -g
        assert abs(bd.evt_limits(g).ratio / (2.0 * a * a / (1.0 + a)) - 1.0) < 0.01
    with pytest.raises(DomainError):
        bd.evt_limits(0.5)


# ------------------------------------------------ gaussian variance bounds

def test_gaussian_order_variance_bound_frozen():
    assert abs(bd.gaussian_order_variance_bound(100, 1).value
               - 3.5392067846453819) < 1e-12
    assert abs(bd.gaussian_order_variance_bound(10**6, 1).value
               - 0.95787293589551536) < 1e-12
    # boundary cell: denominator positive, value finite
    v = bd.gaussian_order_variance_bound(10, 5).value
    assert 0.0 < v < math.inf


def test_gaussian_order_variance_bound_errors():
    with pytest.raises(DomainError):
        bd.gaussian_order_variance_bound(2, 1)
    with pytest.raises(InputError):
        bd.gaussian_order_variance_bound(10, 6)


def test_gaussian_order_variance_dominates_proof_terms():
    for n in (10, 100, 10**4, 10**6):
        for k in (1, 2, n // 4, n // 2):
            if k < 1:
                continue
            stated = bd.gaussian_order_variance_bound(n, k).value
            assert stated >= bd.gaussian_order_variance_proof_terms(n, k) - 1e-12


def test_signed_max_variance_bound():
    assert abs(bd.gaussian_signed_max_variance_bound(1000).value
               - 2.8293425613872962) < 1e-12
    v11 = bd.gaussian_signed_max_variance_bound(11).value
    assert 0.0 < v11 < math.inf
    assert abs(v11 - 21.912470316114838) < 1e-10
    with pytest.raises(DomainError):
        bd.gaussian_signed_max_variance_bound(10)


def test_signed_max_bound_decreasing():
    ns = [100, 200, 400, 1000, 4000, 10**4, 10**5, 10**6]
    vals = [bd.gaussian_signed_max_variance_bound(n).value for n in ns]
    assert all(b < a for a, b in zip(vals, vals[1:]))


# ------------------------------------------------------- lower-tail bound

def test_exponential_lower_tail_values():
    assert abs(bd.exponential_lower_tail_bound(1000, 10, 1.0)
               - 0.013626967146253437) < 1e-14
    near = bd.exponential_lower_tail_bound(1000, 4, math.log(2.0) + 1e-12)
    assert abs(near - math.exp(-1.0)) < 1e-9
    with pytest.raises(DomainError):
        bd.exponential_lower_tail_bound(1000, 10, math.log(100.0))
    with pytest.raises(DomainError):
        bd.exponential_lower_tail_bound(1000, 10, math.log(2.0))


def test_lower_tail_statement_dominates_proof_form():
    for z in np.linspace(math.log(2.0) + 1e-6, math.log(100.0) - 1e-6, 50):
        stated = bd.exponential_lower_tail_bound(1000, 10, float(z))
        sharper = bd.exponential_lower_tail_proof_bound(1000, 10, float(z))
        assert stated >= sharper - 1e-15


# ----------------------------------------------------------- max bernstein

def test_gaussian_max_vn_residuals_and_values():
    for n in (10**3, 10**6, 10**8, 10**10):
        p = bd.gaussian_max_vn(n)
        assert abs(p.residual) < 1e-10
        lhs = 16.0 / p.v_n + math.log(1.0 + 2.0 / p.v_n + 4.0 * math.log(4.0 / p.v_n))
        assert abs(lhs - math.log(2.0 * n)) < 1e-10
    assert abs(bd.gaussian_max_vn(10**9).v_n - 0.8355661223912346) < 1e-9
    assert bd.gaussian_max_vn(10**9).applicable
    assert bd.gaussian_max_vn(10**8).applicable
    assert not bd.gaussian_max_vn(10**6).applicable


def test_gaussian_max_vn_monotone():
    for n in (10**3, 10**5, 10**7, 10**9):
        assert bd.gaussian_max_vn(2 * n).v_n < bd.gaussian_max_vn(n).v_n


def test_gaussian_max_bernstein_threshold():
    params = bd.GaussianMaxParams(n=0, v_n=0.25, residual=0.0, applicable=True)
    assert bd.gaussian_max_bernstein(params, 0.0).value == 0.0
    assert abs(bd.gaussian_max_bernstein(params, 2.0).value - 2.0) < 1e-15
    na = bd.GaussianMaxParams(n=0, v_n=2.0, residual=0.0, applicable=False)
    with pytest.raises(PreconditionError):
        bd.gaussian_max_bernstein(na, 1.0)
    assert bd.gaussian_max_bernstein(na, 1.0, require_applicable=False).value > 0


def test_gaussian_max_logmgf_pole():
    params = bd.GaussianMaxParams(n=0, v_n=0.25, residual=0.0, applicable=True)
    assert bd.gaussian_max_logmgf_bound(params, 0.0) == 0.0
    near_pole = bd.gaussian_max_logmgf_bound(params, 2.0 - 1e-9)
    assert near_pole > 1e7
    with pytest.raises(DomainError):
        bd.gaussian_max_logmgf_bound(params, 2.0)


def test_sub_gamma_threshold():
    assert abs(bd.sub_gamma_tail_threshold(2.0, 1.0, 2.0)
               - (math.sqrt(8.0) + 2.0)) < 1e-15
    assert bd.sub_gamma_tail_threshold(2.0, 1.0, 0.0) == 0.0
    assert bd.sub_gamma_tail_threshold(0.0, 3.0, 2.0) == 6.0
    with pytest.raises(InputError):
        bd.sub_gamma_tail_threshold(-1.0, 0.0, 0.0)


# --------------------------------------------------------- median bernstein

def test_gaussian_median_bernstein():
    b = bd.gaussian_median_bernstein(100, 1.0)
    assert abs(b.inputs["v_n"] - 8.0 / (100.0 * math.log(2.0))) < 1e-16
    assert abs(b.value - 0.5483947075376214) < 1e-12
    assert bd.gaussian_median_bernstein(100, 0.0).value == 0.0
    v1 = bd.gaussian_median_bernstein(100, 1.0).inputs["v_n"]
    v2 = bd.gaussian_median_bernstein(200, 1.0).inputs["v_n"]
    assert abs(v1 / v2 - 2.0) < 1e-12
    with pytest.raises(InputError):
        bd.gaussian_median_bernstein(101, 1.0)


def test_gaussian_median_logmgf():
    assert bd.gaussian_median_logmgf_bound(100, 0.0) == 0.0
    assert bd.gaussian_median_logmgf_bound(100, 1.0) > 0.0
    with pytest.raises(DomainError):
        bd.gaussian_median_logmgf_bound(100, 1e9)


# ----------------------------------------------------------- shifted max

def test_maximum_shift_against_independent_quadrature():
    for n in (10, 100, 1000):
        def integrand(y):
            return (float(u_tilde(math.exp(y))) * n * math.exp(-y)
                    * (1.0 - math.exp(-y)) ** (n - 1))

        oracle, err = quad(integrand, 1e-9, 60.0, limit=200)
        assert err < 5e-8
        expect = float(u_tilde(math.exp(harmonic_number(n)))) - oracle
        assert abs(bd.maximum_shift(n) - expect) < 1e-7


def test_maximum_shift_frozen_values():
    assert abs(bd.maximum_shift(10) - 0.050534182) < 1e-7
    assert abs(bd.maximum_shift(1000) - 0.014304710) < 1e-7
    assert abs(bd.maximum_shift(100000) - 0.007075811) < 1e-7
    for n in (2, 10, 100, 1000):
        assert bd.maximum_shift(n) > 0.0


def test_shifted_tail_threshold():
    b0 = bd.gaussian_max_shifted_tail(100, 0.0)
    assert abs(b0.value - b0.inputs["delta_n"]) < 1e-16
    b = bd.gaussian_max_shifted_tail(1000, 2.0)
    ut = float(u_tilde(1000.0))
    expect = 2.0 / (3.0 * ut) + math.sqrt(2.0) / ut + bd.maximum_shift(1000)
    assert abs(b.value - expect) < 1e-15
    with pytest.raises(InputError):
        bd.gaussian_max_shifted_tail(1, 1.0)


def test_bound_values_non_negative_on_domains():
    assert bd.gaussian_order_variance_bound(50, 3).value >= 0
    assert bd.gaussian_signed_max_variance_bound(64).value >= 0
    assert bd.gaussian_median_bernstein(64, 3.0).value >= 0
    assert bd.gaussian_max_shifted_tail(64, 3.0).value >= 0
    assert 0.0 <= bd.exponential_lower_tail_bound(64, 4, 1.2) <= 1.0
