"""Family tests: closed-form examples, round trips, hazard monotonicity,
the concavity equivalence, the quantile sandwich and the exact
extended-regular-variation identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordstat.distributions import (
    AbsGaussian,
    Exponential,
    GPD,
    Gumbel,
    StdGaussian,
    gauss_abs_hazard_floor,
    parse_family,
    u_tilde,
    u_tilde_sandwich,
)
from ordstat.errors import DomainError, InputError, UnsupportedError

ALL_FAMILIES = [Exponential(), StdGaussian(), AbsGaussian(), Gumbel(),
                GPD(-1.0), GPD(-0.5), GPD(0.0), GPD(0.5)]
MONOTONE = [d for d in ALL_FAMILIES if d.monotone_hazard]


def _interior_grid(d, points=1000, eps=1e-4):
    lo, hi = d.quantile(eps), d.quantile(1 - eps)
    return np.linspace(lo, hi, points)


# ---------------------------------------------------------------- examples

def test_evaluate_examples():
    e = Exponential()
    assert e.evaluate(0.0) == (0.0, 1.0, 1.0)
    c, s, f = e.evaluate(math.log(2.0))
    assert abs(c - 0.5) < 1e-15 and abs(s - 0.5) < 1e-15 and abs(f - 0.5) < 1e-15
    c, s, f = AbsGaussian().evaluate(0.0)
    # density at the support edge is 2 phi(0) = sqrt(2/pi)
    assert (c, s) == (0.0, 1.0)
    assert abs(f - 0.7978845608028654) < 1e-15


def test_evaluate_rejects_non_finite():
    with pytest.raises(InputError):
        Exponential().evaluate(math.inf)
    with pytest.raises(InputError):
        StdGaussian().evaluate(math.nan)


def test_quantile_examples():
    assert abs(Exponential().quantile(1 - 1 / math.e) - 1.0) < 1e-15
    assert GPD(-1.0).quantile(0.75) == 0.75
    assert abs(StdGaussian().quantile(0.8333333) - 0.9674214326889796) < 1e-12


def test_quantile_rejects_bad_levels():
    for d in ALL_FAMILIES:
        for p in (0.0, 1.0, -1.0, 2.0):
            with pytest.raises(InputError):
                d.quantile(p)


def test_u_transform_examples():
    assert abs(Exponential().u_transform(math.e ** 2) - 2.0) < 1e-14
    assert abs(GPD(-1.0).u_transform(4.0) - 0.75) < 1e-15
    assert abs(GPD(0.5).u_transform(9.0) - 4.0) < 1e-13
    with pytest.raises(InputError):
        Exponential().u_transform(1.0)
    with pytest.raises(InputError):
        GPD(0.5).u_transform(0.5)


def test_hazard_examples():
    e = Exponential()
    for x in (0.0, 0.5, 3.0, 40.0):
        assert e.hazard(x) == 1.0
    assert abs(GPD(-1.0).hazard(0.5) - 2.0) < 1e-15
    assert abs(AbsGaussian().hazard(1.0) - 1.525135276160981) < 1e-13


def test_hazard_domain_errors():
    u = GPD(-1.0)
    with pytest.raises(DomainError):
        u.hazard(1.0)          # upper endpoint of the support
    with pytest.raises(DomainError):
        u.hazard(1.0 - 1e-13)  # within tolerance of the endpoint
    assert u.hazard(0.999) > 0


def test_u_tilde_examples():
    assert abs(u_tilde(3.0) - 0.9674215661025869) < 1e-12
    assert abs(u_tilde(100.0) - 2.5758293035489) < 1e-11
    # the 0.995 Gaussian quantile, by definition
    assert abs(u_tilde(100.0) - StdGaussian().quantile(0.995)) < 3e-12
    assert u_tilde(1.0 + 1e-12) < 1e-5
    with pytest.raises(InputError):
        u_tilde(1.0)


def test_u_tilde_increasing():
    ts = np.geomspace(1.001, 1e8, 60)
    vals = u_tilde(ts)
    assert np.all(np.diff(vals) > 0)


def test_sandwich_values_and_containment():
    sw = u_tilde_sandwich(3.0)
    assert abs(sw.lower - 0.6850522685928132) < 1e-12
    assert abs(sw.upper - 1.3622007824928197) < 1e-12
    sw100 = u_tilde_sandwich(100.0)
    assert abs(sw100.lower - 2.5294705362951597) < 1e-12
    assert abs(sw100.upper - 2.7900744712471770) < 1e-12
    for t in (3.0, 100.0):
        sw = u_tilde_sandwich(t)
        assert sw.lower <= u_tilde(t) <= sw.upper
    with pytest.raises(DomainError):
        u_tilde_sandwich(2.999)


@given(st.floats(3.0, 1e8))
@settings(max_examples=80, deadline=None)
def test_sandwich_width_identity(t):
    sw = u_tilde_sandwich(t)
    assert abs((sw.upper ** 2 - sw.lower ** 2) - math.log(4.0)) < 1e-9


def test_sandwich_holds_on_log_grid():
    for t in np.geomspace(3.0, 1e8, 60):
        sw = u_tilde_sandwich(float(t))
        mid = u_tilde(float(t))
        assert sw.lower <= mid <= sw.upper


def test_hazard_floor_examples():
    assert abs(gauss_abs_hazard_floor(math.log(2.0)) - 0.8325546111576978) < 1e-14
    assert abs(gauss_abs_hazard_floor(2.0) - 1.1604195751020285) < 1e-14
    ys = np.linspace(0.01, 20.0, 50)
    floors = gauss_abs_hazard_floor(ys)
    assert np.all(np.diff(floors) > 0)
    with pytest.raises(DomainError):
        gauss_abs_hazard_floor(0.0)


def test_hazard_floor_below_hazard():
    d = AbsGaussian()
    for y in np.linspace(0.05, 30.0, 120):
        x = float(u_tilde(math.exp(y)))
        assert gauss_abs_hazard_floor(y) <= d.hazard(x) + 1e-12


def test_absgaussian_u_transform_is_u_tilde():
    # the U-transform of the absolute Gaussian IS the u_tilde map, which
    # is what lets the suffix-sum sampler reuse one code path
    d = AbsGaussian()
    for t in (1.5, 3.0, 100.0, 1e6):
        assert d.u_transform(t) == u_tilde(t)
    for y in (0.5, 2.0, 10.0):
        assert d.u_transform_log(y) == u_tilde(math.exp(y))


def test_auxiliary_scale():
    assert Exponential().auxiliary_scale(1e6) == 1.0
    assert abs(GPD(-1.0).auxiliary_scale(10.0) - 0.1) < 1e-16
    assert abs(GPD(0.25).auxiliary_scale(16.0) - 2.0) < 1e-15
    for d in (StdGaussian(), AbsGaussian(), Gumbel()):
        with pytest.raises(UnsupportedError):
            d.auxiliary_scale(10.0)


# -------------------------------------------------------------- invariants

@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.name)
def test_round_trip_cdf_quantile(d):
    ps = np.geomspace(1e-6, 0.5, 40)
    grid = np.concatenate([ps, 1.0 - ps])
    x = d.quantile(grid)
    assert np.max(np.abs(np.asarray(d.cdf(x)) - grid)) <= 1e-10


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.name)
def test_cdf_plus_survival_is_one(d):
    xs = _interior_grid(d, points=200)
    c, s, f = d.evaluate(xs)
    assert np.max(np.abs(c + s - 1.0)) <= 1e-12
    assert np.all(np.asarray(f) >= 0.0)


def test_monotone_hazard_flags():
    flags = {d.name: d.monotone_hazard for d in ALL_FAMILIES}
    assert flags["exponential"] and flags["gaussian"] and flags["absgaussian"]
    assert flags["gumbel"] and flags["gpd(-1)"] and flags["gpd(-0.5)"]
    assert flags["gpd(0)"]
    assert not flags["gpd(0.5)"]


@pytest.mark.parametrize("d", MONOTONE, ids=lambda d: d.name)
def test_hazard_monotone_on_support_grid(d):
    xs = _interior_grid(d, points=1000)
    h = np.asarray(d.hazard(xs))
    assert np.all(np.diff(h) >= -1e-9 * np.maximum(h[:-1], 1.0))


def test_hazard_decreasing_for_heavy_tail():
    d = GPD(0.5)
    xs = np.linspace(0.1, 20.0, 100)
    h = np.asarray(d.hazard(xs))
    assert np.all(np.diff(h) < 0)


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.name)
def test_u_transform_consistent_with_quantile(d):
    for t in (1.5, 3.0, 10.0, 1e4):
        assert abs(d.u_transform(t) - d.quantile(1.0 - 1.0 / t)) < 1e-9


def test_exact_erv_identity():
    # (U(tx) - U(t)) / a(t) equals the canonical limit exactly for the
    # families with a closed-form auxiliary scale
    xs = np.array([0.5, 1.0, 2.0, 7.5, 100.0])
    ts = np.array([3.0, 10.0, 1e3, 1e6])
    for gamma in (-1.0, -0.5, 0.25, 0.4):
        d = GPD(gamma)
        target = (xs ** gamma - 1.0) / gamma
        for t in ts:
            lhs = (np.asarray(d.u_transform(t * xs)) - d.u_transform(t)) / d.auxiliary_scale(t)
            assert np.max(np.abs(lhs - target)) < 1e-10
    e = Exponential()
    for t in ts:
        lhs = (np.asarray(e.u_transform(t * xs)) - e.u_transform(t)) / e.auxiliary_scale(t)
        assert np.max(np.abs(lhs - np.log(xs))) < 1e-10


def test_gpd_zero_matches_exponential():
    g0, e = GPD(0.0), Exponential()
    xs = np.linspace(0.0, 10.0, 50)
    assert np.allclose(g0.survival(xs), e.survival(xs), rtol=0, atol=1e-15)
    ps = np.linspace(0.01, 0.99, 20)
    assert np.allclose(g0.quantile(ps), e.quantile(ps), rtol=1e-15)


def test_gpd_endpoint_clamp():
    d = GPD(-0.5)   # support [0, 2]
    assert d.quantile(1 - 1e-16) <= 2.0
    assert abs(d.quantile(1 - 1e-12) - 2.0) < 1e-5


def test_gumbel_closed_forms():
    g = Gumbel()
    assert abs(g.quantile(math.exp(-1.0))) < 1e-15          # -log(-log p) at p = 1/e
    x = g.u_transform(10.0)
    assert abs(g.cdf(x) - 0.9) < 1e-12
    # hazard tends to 1 from below as x grows
    assert 0.999 < g.hazard(8.0) < 1.0


def test_parse_family_round_trip():
    for token in ("exponential", "gaussian", "absgaussian", "gumbel",
                  "gpd(-1)", "gpd(0.25)"):
        d = parse_family(token)
        assert parse_family(d.name).name == d.name
    with pytest.raises(InputError):
        parse_family("cauchy")
    with pytest.raises(InputError):
        parse_family("gpd(oops)")


@given(st.sampled_from(ALL_FAMILIES), st.floats(1e-9, 1 - 1e-9))
@settings(max_examples=100, deadline=None)
def test_quantile_round_trip_property(d, p):
    x = d.quantile(p)
    assert abs(float(np.asarray(d.cdf(x))) - p) <= 1e-9
