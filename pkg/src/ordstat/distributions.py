"""Parametric sampling families and their quantile / hazard machinery.

Five families are supported: the unit-rate exponential, the standard
Gaussian, the absolute value of a standard Gaussian, the standard Gumbel
``exp(-exp(-x))`` and the generalized Pareto family with shape ``gamma``
(``gamma = -1`` is the uniform on [0, 1], ``gamma = 0`` the exponential).

Each family exposes, besides the usual cdf/survival/density accessors:

``quantile_from_survival(s)``
    the quantile parameterized by tail mass, usable far beyond the
    resolution of ``1 - p`` in double precision;
``u_transform(t)``
    the ``(1 - 1/t)``-quantile ``U(t)``, the map that turns exponential
    order statistics into order statistics of this family;
``u_transform_log(y)``
    ``U(exp(y))``, evaluated in survival space so large ``y`` stays exact;
``auxiliary_scale(t)``
    the exact extreme-value normalizing scale, available only where a
    closed form exists (exponential and generalized Pareto).

All methods accept scalars or arrays and are pure functions; instances are
immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, UnsupportedError
from .special import (
    gauss_cdf,
    gauss_hazard,
    gauss_pdf,
    gauss_quantile,
    gauss_quantile_from_survival,
    gauss_sf,
)

__all__ = [
    "DistributionModel", "Exponential", "StdGaussian", "AbsGaussian",
    "Gumbel", "GPD", "QuantileSandwich", "u_tilde", "u_tilde_sandwich",
    "gauss_abs_hazard_floor", "parse_family", "FAMILY_NAMES",
]

_LOG2 = math.log(2.0)
_LOG_PI = math.log(math.pi)
_LOG_4PI = math.log(4.0 * math.pi)

# Admissible constant in the absolute-Gaussian hazard floor; 1/2 is the
# value every downstream bound assumes, so no knob is exposed.
_KAPPA1 = 0.5


def _check_finite(x, what: str):
    arr = np.asarray(x, dtype=np.float64)
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{what} must be finite")
    return arr


def _check_prob_open(p, what: str):
    arr = np.asarray(p, dtype=np.float64)
    if arr.size and (not np.all(np.isfinite(arr))
                     or np.any(arr <= 0.0) or np.any(arr >= 1.0)):
        raise InputError(f"{what} must lie strictly in (0, 1)")
    return arr


def _scalar_like(ref, value):
    return float(value) if np.isscalar(ref) or np.ndim(ref) == 0 else value


class DistributionModel:
    """Base class; subclasses fill in the family-specific closed forms."""

    name: str = "?"
    monotone_hazard: bool = False
    mda_tail_index: float = 0.0

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def survival(self, x):
        raise NotImplementedError

    def density(self, x):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def quantile_from_survival(self, s):
        raise NotImplementedError

    def evaluate(self, x):
        """(cdf, survival, density) with input validation."""
        arr = _check_finite(x, "evaluation point")
        return (_scalar_like(x, self.cdf(arr)),
                _scalar_like(x, self.survival(arr)),
                _scalar_like(x, self.density(arr)))

    def hazard(self, x):
        """density / survival; raises DomainError where the survival is 0."""
        arr = _check_finite(x, "evaluation point")
        sf = np.asarray(self.survival(arr), dtype=np.float64)
        if np.any(sf <= 0.0):
            raise DomainError(f"{self.name}: hazard undefined where survival is 0")
        return _scalar_like(x, np.asarray(self.density(arr)) / sf)

    def u_transform(self, t):
        """U(t), the (1 - 1/t)-quantile, defined for t > 1."""
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 1.0)):
            raise InputError("u_transform requires t > 1")
        return _scalar_like(t, self.quantile_from_survival(1.0 / arr))

    def u_transform_log(self, y):
        """U(exp(y)) for y > 0, evaluated through the survival e**-y."""
        arr = np.asarray(y, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
            raise InputError("u_transform_log requires y > 0")
        return _scalar_like(y, self.quantile_from_survival(np.exp(-arr)))

    def auxiliary_scale(self, t):
        raise UnsupportedError(
            f"{self.name}: no exact auxiliary function is adopted for this family")

    def __repr__(self):
        return f"{type(self).__name__}()"


class Exponential(DistributionModel):
    """Unit-rate exponential; the reference family of the whole package."""

    name = "exponential"
    monotone_hazard = True
    mda_tail_index = 0.0

    def support(self):
        return (0.0, math.inf)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 0.0, -np.expm1(-np.maximum(x, 0.0)), 0.0)

    def survival(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 0.0, np.exp(-np.maximum(x, 0.0)), 1.0)

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x >= 0.0, np.exp(-np.abs(x)), 0.0)

    def quantile(self, p):
        arr = _check_prob_open(p, "quantile level")
        return _scalar_like(p, -np.log1p(-arr))

    def quantile_from_survival(self, s):
        return -np.log(s)

    def hazard(self, x):
        # memorylessness: exactly 1 on the support
        arr = _check_finite(x, "evaluation point")
        return _scalar_like(x, np.where(np.asarray(arr) >= 0.0, 1.0, 0.0))

    def u_transform(self, t):
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 1.0)):
            raise InputError("u_transform requires t > 1")
        return _scalar_like(t, np.log(arr))

    def u_transform_log(self, y):
        arr = np.asarray(y, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
            raise InputError("u_transform_log requires y > 0")
        return _scalar_like(y, arr + 0.0)

    def auxiliary_scale(self, t):
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and np.any(arr < 1.0):
            raise InputError("auxiliary scale is defined for t >= 1")
        return _scalar_like(t, np.ones_like(arr))


class StdGaussian(DistributionModel):
    """Standard Gaussian.  Its hazard rate is increasing on the whole line."""

    name = "gaussian"
    monotone_hazard = True
    mda_tail_index = 0.0

    def support(self):
        return (-math.inf, math.inf)

    def cdf(self, x):
        return gauss_cdf(x)

    def survival(self, x):
        return gauss_sf(x)

    def density(self, x):
        return gauss_pdf(x)

    def quantile(self, p):
        _check_prob_open(p, "quantile level")
        return gauss_quantile(p)

    def quantile_from_survival(self, s):
        return gauss_quantile_from_survival(s)

    def hazard(self, x):
        _check_finite(x, "evaluation point")
        return gauss_hazard(x)


class AbsGaussian(DistributionModel):
    """Absolute value of a standard Gaussian.

    Shares the Gaussian hazard rate on the positive half line, where that
    rate is non-decreasing; its U-transform is the map t -> Phi^{-1}(1 - 1/(2t)).
    """

    name = "absgaussian"
    monotone_hazard = True
    mda_tail_index = 0.0

    def support(self):
        return (0.0, math.inf)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 0.0, 1.0 - 2.0 * gauss_sf(np.maximum(x, 0.0)), 0.0)

    def survival(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x > 0.0, 2.0 * gauss_sf(np.maximum(x, 0.0)), 1.0)

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x >= 0.0, 2.0 * gauss_pdf(x), 0.0)

    def quantile(self, p):
        arr = _check_prob_open(p, "quantile level")
        return _scalar_like(p, gauss_quantile_from_survival((1.0 - arr) / 2.0))

    def quantile_from_survival(self, s):
        return gauss_quantile_from_survival(np.asarray(s, dtype=np.float64) / 2.0)

    def hazard(self, x):
        arr = _check_finite(x, "evaluation point")
        a = np.atleast_1d(np.asarray(arr, dtype=np.float64))
        out = np.where(a >= 0.0, gauss_hazard(np.maximum(a, 0.0)), 0.0)
        return _scalar_like(x, out[0] if np.ndim(x) == 0 else out)


class Gumbel(DistributionModel):
    """Standard Gumbel, distribution function exp(-exp(-x))."""

    name = "gumbel"
    monotone_hazard = True
    mda_tail_index = 0.0

    def support(self):
        return (-math.inf, math.inf)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.exp(-np.exp(-x))

    def survival(self, x):
        x = np.asarray(x, dtype=np.float64)
        return -np.expm1(-np.exp(-x))

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.exp(-x - np.exp(-x))

    def quantile(self, p):
        arr = _check_prob_open(p, "quantile level")
        return _scalar_like(p, -np.log(-np.log(arr)))

    def quantile_from_survival(self, s):
        s = np.asarray(s, dtype=np.float64)
        return -np.log(-np.log1p(-s))

    def hazard(self, x):
        arr = _check_finite(x, "evaluation point")
        u = np.exp(-np.asarray(arr, dtype=np.float64))
        # u e^{-u} / (1 - e^{-u}); expm1 keeps the right tail (u -> 0) exact
        return _scalar_like(x, u * np.exp(-u) / (-np.expm1(-u)))


class GPD(DistributionModel):
    """Generalized Pareto with shape ``gamma`` (scale 1, location 0).

    Survival ``(1 + gamma x)**(-1/gamma)``; the support is [0, inf) for
    gamma >= 0 and [0, -1/gamma] otherwise.  The hazard 1/(1 + gamma x) is
    non-increasing for gamma > 0, so the monotone-hazard flag is true
    exactly when gamma <= 0.
    """

    # quantiles within this distance of the finite endpoint count as "at"
    # the endpoint for the hazard domain check
    _ENDPOINT_TOL = 1e-12

    def __init__(self, gamma: float):
        if not math.isfinite(gamma):
            raise InputError("gamma must be finite")
        self.gamma = float(gamma)
        self.name = f"gpd({self.gamma:g})"
        self.monotone_hazard = self.gamma <= 0.0
        self.mda_tail_index = self.gamma

    def support(self):
        if self.gamma < 0.0:
            return (0.0, -1.0 / self.gamma)
        return (0.0, math.inf)

    def _in_support(self, x):
        lo, hi = self.support()
        return (x >= lo) & (x <= hi)

    def survival(self, x):
        g = self.gamma
        x = np.asarray(x, dtype=np.float64)
        if g == 0.0:
            core = np.exp(-np.maximum(x, 0.0))
        else:
            inner = np.maximum(1.0 + g * np.clip(x, *self.support()), 0.0)
            with np.errstate(divide="ignore"):
                core = inner ** (-1.0 / g)
        return np.where(x <= 0.0, 1.0, np.where(self._in_support(x), core, 0.0))

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def density(self, x):
        g = self.gamma
        x = np.asarray(x, dtype=np.float64)
        if g == 0.0:
            core = np.exp(-np.abs(x))
        else:
            inner = np.maximum(1.0 + g * np.clip(x, *self.support()), 0.0)
            with np.errstate(divide="ignore"):
                core = inner ** (-1.0 / g - 1.0)
        return np.where(self._in_support(x), core, 0.0)

    def quantile(self, p):
        arr = _check_prob_open(p, "quantile level")
        return _scalar_like(p, self._q_from_log_survival(np.log1p(-arr)))

    def quantile_from_survival(self, s):
        return self._q_from_log_survival(np.log(np.asarray(s, dtype=np.float64)))

    def _q_from_log_survival(self, log_s):
        g = self.gamma
        if g == 0.0:
            return -log_s
        q = np.expm1(-g * log_s) / g
        if g < 0.0:
            q = np.minimum(q, -1.0 / g)
        return q

    def hazard(self, x):
        arr = _check_finite(x, "evaluation point")
        a = np.asarray(arr, dtype=np.float64)
        lo, hi = self.support()
        if np.any(a > hi - self._ENDPOINT_TOL) or np.any(a < lo):
            raise DomainError(f"{self.name}: hazard undefined at or beyond the endpoint")
        return _scalar_like(x, np.where(a >= lo, 1.0 / (1.0 + self.gamma * a), 0.0))

    def u_transform(self, t):
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 1.0)):
            raise InputError("u_transform requires t > 1")
        g = self.gamma
        out = np.log(arr) if g == 0.0 else np.expm1(g * np.log(arr)) / g
        return _scalar_like(t, out)

    def u_transform_log(self, y):
        arr = np.asarray(y, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
            raise InputError("u_transform_log requires y > 0")
        g = self.gamma
        out = arr + 0.0 if g == 0.0 else np.expm1(g * arr) / g
        return _scalar_like(y, out)

    def auxiliary_scale(self, t):
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and np.any(arr < 1.0):
            raise InputError("auxiliary scale is defined for t >= 1")
        out = np.exp(self.gamma * np.log(arr))
        return _scalar_like(t, out)

    def __repr__(self):
        return f"GPD(gamma={self.gamma:g})"


@dataclass(frozen=True)
class QuantileSandwich:
    """Closed-form bracket for the absolute-Gaussian quantile map at level t."""

    t: float
    lower: float
    upper: float


def u_tilde(t):
    """Quantile map of the absolute Gaussian: Phi^{-1}(1 - 1/(2t)), t > 1."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 1.0)):
        raise InputError("u_tilde requires t > 1")
    return _scalar_like(t, gauss_quantile_from_survival(0.5 / arr))


def u_tilde_sandwich(t) -> QuantileSandwich:
    """Two-sided closed-form bracket for u_tilde(t), valid for t >= 3.

    lower = sqrt(2 log 2t - log log 2t - log 4pi),
    upper = sqrt(2 log 2t - log log 2t - log pi);
    upper**2 - lower**2 = log 4 identically.
    """
    tv = float(t)
    if not math.isfinite(tv) or tv < 3.0:
        raise DomainError("the sandwich is asserted only for t >= 3")
    base = 2.0 * math.log(2.0 * tv) - math.log(math.log(2.0 * tv))
    return QuantileSandwich(t=tv,
                            lower=math.sqrt(base - _LOG_4PI),
                            upper=math.sqrt(base - _LOG_PI))


def gauss_abs_hazard_floor(y):
    """Pointwise lower bound sqrt((y + log 2) / 2) for the absolute-Gaussian
    hazard evaluated at u_tilde(exp(y)), y > 0."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
        raise DomainError("the hazard floor requires y > 0")
    return _scalar_like(y, np.sqrt(_KAPPA1 * (arr + _LOG2)))


FAMILY_NAMES = ("exponential", "gaussian", "absgaussian", "gumbel", "gpd")


def parse_family(token: str) -> DistributionModel:
    """Build a family from a config token such as ``gumbel`` or ``gpd(-0.5)``."""
    tok = token.strip().lower()
    if tok == "exponential":
        return Exponential()
    if tok in ("gaussian", "stdgaussian"):
        return StdGaussian()
    if tok == "absgaussian":
        return AbsGaussian()
    if tok == "gumbel":
        return Gumbel()
    if tok.startswith("gpd(") and tok.endswith(")"):
        try:
            return GPD(float(tok[4:-1]))
        except ValueError as exc:
            raise InputError(f"bad GPD shape in family token {token!r}") from exc
    raise InputError(f"unknown family token {token!r}")
