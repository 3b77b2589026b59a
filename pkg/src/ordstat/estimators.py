"""Monte Carlo estimators for the empirical side of every verification.

All estimators stream over replicates in fixed-size chunks whose size
depends only on the sample dimension, never on the worker count, and every
replicate owns its own counter-based stream; results are therefore
bit-identical no matter how the work is scheduled.  The chunk loop honours
the ``ORDSTAT_THREADS`` environment variable (0 or unset = one worker per
CPU).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import kernels
from .distributions import DistributionModel
from .errors import InputError, PreconditionError, RangeError
from .renyi import order_stat_columns_batch
from .rng import substream_seed

__all__ = [
    "McEstimate", "MonotoneMap", "worker_count",
    "jackknife_variance", "empirical_order_stat_variance",
    "mean_sq_spacing", "mean_inv_hazard_sq", "spacing_samples",
    "empirical_exceedance", "negative_association_cov",
    "empirical_logmgf", "empirical_logmgf_estimate",
    "empirical_entropy", "empirical_entropy_estimate",
    "centered_logmgf_estimate", "entropy_inequality_estimates",
    "concavity_probe", "order_stat_samples", "collect_columns",
    "variance_estimate", "direct_max_samples",
]

_EXP_ARG_MAX = 500.0  # |lambda| * max |sample| beyond this risks overflow

# target number of draws per chunk; the replicate count per chunk is
# derived from it so memory stays flat as n varies
_CHUNK_DRAWS = 1 << 21


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo point estimate with its CLT standard error."""

    value: float
    stderr: float
    replicates: int


def worker_count() -> int:
    """Worker cap from ORDSTAT_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get("ORDSTAT_THREADS", "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError:
        raise InputError(f"ORDSTAT_THREADS must be an integer, got {raw!r}")
    cpus = os.cpu_count() or 1
    if requested <= 0:
        return cpus
    return min(requested, cpus)


def _chunked_columns(d: DistributionModel, n: int, ks, replicates: int,
                     seed: int) -> np.ndarray:
    """(replicates, len(ks)) order-statistic columns, chunked and threaded.

    Chunk boundaries depend only on n, and chunk c covers replicate streams
    [c*B, (c+1)*B), so the assembled matrix is independent of scheduling.
    """
    batch = max(1, min(replicates, _CHUNK_DRAWS // max(n, 1)))
    starts = list(range(0, replicates, batch))

    def one(start: int) -> np.ndarray:
        count = min(batch, replicates - start)
        return order_stat_columns_batch(d, n, ks, seed, start, count)

    workers = worker_count()
    if workers <= 1 or len(starts) <= 1:
        parts = [one(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, starts))
    return parts[0] if len(parts) == 1 else np.vstack(parts)


def order_stat_samples(d: DistributionModel, n: int, k: int, replicates: int,
                       master_seed: int, label: str) -> np.ndarray:
    """R independent draws of X_(k), one replicate stream each."""
    if not 1 <= k <= n:
        raise InputError(f"order-statistic index {k} outside 1..{n}")
    seed = substream_seed(master_seed, label)
    return _chunked_columns(d, n, [k], replicates, seed)[:, 0]


def collect_columns(d: DistributionModel, n: int, ks, replicates: int,
                    master_seed: int, label: str) -> np.ndarray:
    """(replicates, len(ks)) matrix of the requested order statistics.

    The shared sampling pass behind suite cells that compare several
    quantities (variance, spacing moments, hazard moments) on the same
    replicates.
    """
    if any(not 1 <= int(k) <= n for k in ks):
        raise InputError(f"order-statistic indices {list(ks)} outside 1..{n}")
    seed = substream_seed(master_seed, label)
    return _chunked_columns(d, n, list(ks), replicates, seed)


def variance_estimate(xs) -> McEstimate:
    """Unbiased variance of a sample vector as an McEstimate."""
    arr = np.asarray(xs, dtype=np.float64)
    if len(arr) < 2:
        raise InputError("variance needs at least two values")
    value, stderr = _variance_with_stderr(arr)
    return McEstimate(value=value, stderr=stderr, replicates=len(arr))


def direct_max_samples(d: DistributionModel, n: int, replicates: int,
                       master_seed: int, label: str) -> np.ndarray:
    """R maxima of the direct i.i.d. sampler, chunked like the other paths."""
    from .renyi import direct_max_batch

    seed = substream_seed(master_seed, label)
    batch = max(1, min(replicates, _CHUNK_DRAWS // max(n, 1)))
    starts = list(range(0, replicates, batch))

    def one(start: int) -> np.ndarray:
        count = min(batch, replicates - start)
        return direct_max_batch(d, n, seed, start, count)

    workers = worker_count()
    if workers <= 1 or len(starts) <= 1:
        parts = [one(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, starts))
    return parts[0] if len(parts) == 1 else np.concatenate(parts)


def jackknife_variance(sample, k: int) -> float:
    """The jackknife variance estimate from one replicate:

    k Delta_k^2 below the median, (n - k + 1) Delta_{k-1}^2 above it.
    """
    n = sample.n
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    v = np.asarray(sample.values, dtype=np.float64)
    if k <= n / 2:
        return float(k * (v[k - 1] - v[k]) ** 2)
    return float((n - k + 1) * (v[k - 2] - v[k - 1]) ** 2)


def _variance_with_stderr(xs: np.ndarray) -> tuple[float, float]:
    """Unbiased sample variance and its standard error via the fourth
    central moment, Var(s^2) = (m4 - (R-3)/(R-1) s^4) / R."""
    r = len(xs)
    s2 = float(xs.var(ddof=1))
    centred = xs - xs.mean()
    m4 = float(np.mean(centred ** 4))
    var_of_var = (m4 - (r - 3) / (r - 1) * s2 * s2) / r
    return s2, math.sqrt(max(var_of_var, 0.0))


def empirical_order_stat_variance(d: DistributionModel, n: int, k: int,
                                  replicates: int, master_seed: int,
                                  label: str = "var") -> McEstimate:
    """Sample variance of X_(k) across independent replicates."""
    if replicates < 100:
        raise InputError("variance estimation needs at least 100 replicates")
    xs = order_stat_samples(d, n, k, replicates, master_seed, f"{label}|{d.name}|{n}|{k}")
    value, stderr = _variance_with_stderr(xs)
    return McEstimate(value=value, stderr=stderr, replicates=replicates)


def _spacing_cols(n: int, k: int) -> tuple[int, int]:
    # the spacing entering the bounds: Delta_k below the median,
    # Delta_{k-1} above it
    if k <= n / 2:
        return k, k + 1
    return k - 1, k


def spacing_samples(d: DistributionModel, n: int, k: int, replicates: int,
                    master_seed: int, label: str = "spacing") -> np.ndarray:
    """R draws of the spacing used by the variance/log-MGF bounds at (n, k)."""
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    hi, lo = _spacing_cols(n, k)
    seed = substream_seed(master_seed, f"{label}|{d.name}|{n}|{k}")
    cols = _chunked_columns(d, n, [hi, lo], replicates, seed)
    return cols[:, 0] - cols[:, 1]


def mean_sq_spacing(d: DistributionModel, n: int, k: int, replicates: int,
                    master_seed: int, label: str = "sqspacing") -> McEstimate:
    """Monte Carlo estimate of the squared-spacing moment for (n, k)."""
    sq = spacing_samples(d, n, k, replicates, master_seed, label) ** 2
    return McEstimate(value=float(sq.mean()),
                      stderr=float(sq.std(ddof=1) / math.sqrt(len(sq))),
                      replicates=replicates)


def mean_inv_hazard_sq(d: DistributionModel, n: int, k: int, replicates: int,
                       master_seed: int, label: str = "invhaz") -> McEstimate:
    """Estimate of E[h(X_(k+1))^-2] (k <= n/2) or E[h(X_(k))^-2] (k > n/2)."""
    if not d.monotone_hazard:
        raise PreconditionError(
            f"{d.name}: inverse-hazard moments are used only under a "
            "non-decreasing hazard rate")
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    col = k + 1 if k <= n / 2 else k
    seed = substream_seed(master_seed, f"{label}|{d.name}|{n}|{k}")
    xs = _chunked_columns(d, n, [col], replicates, seed)[:, 0]
    w = 1.0 / np.asarray(d.hazard(xs)) ** 2
    return McEstimate(value=float(w.mean()),
                      stderr=float(w.std(ddof=1) / math.sqrt(len(w))),
                      replicates=replicates)


def _pilot_mean(d: DistributionModel, n: int, k: int, replicates: int,
                master_seed: int, label: str) -> float:
    xs = order_stat_samples(d, n, k, replicates, master_seed, f"{label}|pilot")
    return float(xs.mean())


def empirical_exceedance(d: DistributionModel, n: int, k: int, threshold: float,
                         replicates: int, master_seed: int,
                         label: str = "tail") -> McEstimate:
    """Frequency of {X_(k) - m > threshold} with binomial standard error.

    The centering m is the mean of an independent pilot run of the same
    size, so the exceedance frequency is not biased by in-sample centering.
    """
    if replicates < 1000:
        raise InputError("exceedance estimation needs at least 1000 replicates")
    centre = _pilot_mean(d, n, k, replicates, master_seed, f"{label}|{d.name}|{n}|{k}")
    xs = order_stat_samples(d, n, k, replicates, master_seed,
                            f"{label}|{d.name}|{n}|{k}|main")
    hits = np.count_nonzero(xs - centre > threshold)
    p = hits / replicates
    return McEstimate(value=p, stderr=math.sqrt(p * (1.0 - p) / replicates),
                      replicates=replicates)


@dataclass(frozen=True)
class MonotoneMap:
    """A non-decreasing map from the fixed menu: identity, exp(lam .),
    or the indicator of (c, inf)."""

    kind: str               # "id" | "exp" | "ind"
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ("id", "exp", "ind"):
            raise InputError(f"unknown monotone map kind {self.kind!r}")
        if self.kind == "exp" and self.param < 0.0:
            raise InputError("exp map needs a non-negative rate")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "id":
            return np.asarray(x, dtype=np.float64)
        if self.kind == "exp":
            return np.exp(self.param * np.asarray(x, dtype=np.float64))
        return (np.asarray(x, dtype=np.float64) > self.param).astype(np.float64)

    @property
    def token(self) -> str:
        return "id" if self.kind == "id" else f"{self.kind}:{self.param:g}"


def negative_association_cov(d: DistributionModel, n: int, k: int,
                             g1: MonotoneMap, g2: MonotoneMap, replicates: int,
                             master_seed: int, label: str = "assoc") -> McEstimate:
    """Covariance estimate of (g1(X_(k+1)), g2(Delta_k)); non-positive in
    expectation for families with non-decreasing hazard rate."""
    if not d.monotone_hazard:
        raise PreconditionError(
            f"{d.name}: negative association is asserted only for "
            "non-decreasing hazard rates")
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    seed = substream_seed(master_seed,
                          f"{label}|{d.name}|{n}|{k}|{g1.token}|{g2.token}")
    cols = _chunked_columns(d, n, [k, k + 1], replicates, seed)
    a = g1(cols[:, 1])
    b = g2(cols[:, 0] - cols[:, 1])
    prod = (a - a.mean()) * (b - b.mean())
    r = len(prod)
    cov = float(prod.sum() / (r - 1))
    return McEstimate(value=cov,
                      stderr=float(prod.std(ddof=1) / math.sqrt(r)),
                      replicates=replicates)


def _guard_exponent(samples: np.ndarray, lam: float):
    if not math.isfinite(lam):
        raise InputError("lambda must be finite")
    if samples.size and abs(lam) * float(np.abs(samples).max()) > _EXP_ARG_MAX:
        raise RangeError("lambda * max|sample| exceeds the overflow guard (500)")


def empirical_logmgf(samples, lam: float) -> float:
    """Centered empirical log-MGF: log mean exp(lam (x - mean x))."""
    xs = np.asarray(samples, dtype=np.float64)
    _guard_exponent(xs, lam)
    w = np.exp(lam * (xs - xs.mean()))
    return float(np.log(w.mean()))


def empirical_logmgf_estimate(samples, lam: float) -> McEstimate:
    """Centered log-MGF with a delta-method standard error.

    The stderr equals the relative standard error of the underlying mean
    of exponentials, which is also the quantity gated at 5% before a
    log-MGF row is considered verifiable.
    """
    xs = np.asarray(samples, dtype=np.float64)
    _guard_exponent(xs, lam)
    w = np.exp(lam * (xs - xs.mean()))
    m = float(w.mean())
    rel = float(w.std(ddof=1) / math.sqrt(len(w)) / m) if len(w) > 1 else 0.0
    return McEstimate(value=float(np.log(m)), stderr=rel, replicates=len(w))


def empirical_entropy(samples, lam: float) -> float:
    """Plug-in estimate of Ent[e^{lam Z}] = E[W log W] - E W log E W."""
    xs = np.asarray(samples, dtype=np.float64)
    _guard_exponent(xs, lam)
    w = np.exp(lam * xs)
    m = float(w.mean())
    return float(np.mean(w * lam * xs) - m * math.log(m))


def empirical_entropy_estimate(samples, lam: float) -> McEstimate:
    """Entropy plug-in with a delta-method standard error.

    Writing the estimate as f(A, W) = A - W log W with A = mean(w log w)
    and W = mean(w), the gradient (1, -(log W + 1)) is propagated through
    the sample covariance of the two averages.
    """
    xs = np.asarray(samples, dtype=np.float64)
    _guard_exponent(xs, lam)
    w = np.exp(lam * xs)
    a = w * lam * xs
    r = len(xs)
    wm = float(w.mean())
    value = float(a.mean()) - wm * math.log(wm)
    grad = np.array([1.0, -(math.log(wm) + 1.0)])
    cov = np.cov(np.vstack([a, w]), ddof=1) / r
    stderr = math.sqrt(max(float(grad @ cov @ grad), 0.0))
    return McEstimate(value=value, stderr=stderr, replicates=r)


def centered_logmgf_estimate(d: DistributionModel, n: int, k: int, lam: float,
                             replicates: int, master_seed: int,
                             label: str = "logmgf") -> McEstimate:
    """Empirical log E exp(lam (X_(k) - E X_(k))) with pilot-run centering."""
    centre = _pilot_mean(d, n, k, replicates, master_seed,
                         f"{label}|{d.name}|{n}|{k}")
    xs = order_stat_samples(d, n, k, replicates, master_seed,
                            f"{label}|{d.name}|{n}|{k}|main")
    return empirical_logmgf_estimate(xs - centre, lam)


def entropy_inequality_estimates(d: DistributionModel, n: int, k: int, lam: float,
                                 replicates: int, master_seed: int,
                                 label: str = "entropy") -> tuple[McEstimate, McEstimate]:
    """Both sides of the entropy-spacing inequality at (n, k, lam).

    Left: Ent[e^{lam X_(k)}].  Right: k E[e^{lam X_(k+1)} psi(lam Delta_k)]
    below the median, (n-k+1) E[e^{lam X_(k)} tau(lam Delta_{k-1})] above
    it.  Both sides are shifted by a common pilot constant (the inequality
    is invariant under that) to keep the exponentials well scaled, and are
    estimated on independent replicate sets.
    """
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    centre = _pilot_mean(d, n, k, replicates, master_seed,
                         f"{label}|{d.name}|{n}|{k}")
    lhs_xs = order_stat_samples(d, n, k, replicates, master_seed,
                                f"{label}|{d.name}|{n}|{k}|lhs") - centre
    lhs = empirical_entropy_estimate(lhs_xs, lam)

    hi, lo = _spacing_cols(n, k)
    seed = substream_seed(master_seed, f"{label}|{d.name}|{n}|{k}|rhs")
    cols = _chunked_columns(d, n, [hi, lo], replicates, seed)
    delta = cols[:, 0] - cols[:, 1]
    _guard_exponent(cols[:, 0] - centre, lam)
    _guard_exponent(delta, lam)
    tau, psi = kernels(lam * delta)
    # in both branches the weight sits on the second extracted column:
    # X_(k+1) below the median, X_(k) above it
    if k <= n / 2:
        terms = k * np.exp(lam * (cols[:, 1] - centre)) * psi
    else:
        terms = (n - k + 1) * np.exp(lam * (cols[:, 1] - centre)) * tau
    rhs = McEstimate(value=float(terms.mean()),
                     stderr=float(terms.std(ddof=1) / math.sqrt(len(terms))),
                     replicates=replicates)
    return lhs, rhs


def concavity_probe(d: DistributionModel, y_grid) -> float:
    """Worst centered second difference of y -> U(e^y) over the grid.

    At most a rounding tolerance for every monotone-hazard family (the map
    is concave exactly then); strictly positive somewhere when the hazard
    decreases, as for the heavy-tailed Pareto shapes.
    """
    y = np.asarray(y_grid, dtype=np.float64)
    if y.ndim != 1 or len(y) < 10:
        raise InputError("need a 1-D grid with at least 10 points")
    steps = np.diff(y)
    if np.any(steps <= 0.0):
        raise InputError("grid must be strictly increasing")
    if steps.max() - steps.min() > 1e-9 * steps.mean():
        raise InputError("grid must be evenly spaced")
    g = np.asarray(d.u_transform_log(y))
    second = g[2:] - 2.0 * g[1:-1] + g[:-2]
    return float(second.max())
