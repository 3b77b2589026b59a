"""Exact sampling of order statistics.

The central fact used everywhere: the descending order statistics of a
unit-rate exponential sample of size n are distributed as the suffix sums

    Y_(k) = sum_{i=k..n} E_i / i,     E_i i.i.d. standard exponential,

and the order statistics of any continuous family follow by applying its
monotone map U(exp(.)) to the Y values.  A plain sort-based inverse-CDF
sampler is provided as an independent oracle for distributional-equality
tests.

Samplers are pure functions of (family, n, stream).  Batch variants give
row r the stream with ``stream_index = first_stream + r``, so results never
depend on how replicates are grouped or scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import DistributionModel, Exponential
from .errors import InputError
from .rng import RngStream, uniforms_batch

__all__ = [
    "OrderStatSample", "harmonic_number", "spacing",
    "sample_exponential_order_stats", "sample_order_stats_renyi",
    "sample_order_stats_direct",
    "exponential_order_stats_batch", "order_stat_columns_batch",
    "direct_order_stats_batch", "direct_max_batch",
]


@dataclass(frozen=True)
class OrderStatSample:
    """One replicate of descending order statistics with its provenance."""

    values: np.ndarray = field(repr=False)
    n: int
    sampler: str            # "renyi" or "direct"
    master_seed: int
    stream_index: int

    def __post_init__(self):
        assert self.values.ndim == 1 and len(self.values) == self.n
        assert np.all(self.values[:-1] >= self.values[1:]), "not descending"

    def __getitem__(self, k: int) -> float:
        """k-th largest value, 1-based."""
        if not 1 <= k <= self.n:
            raise InputError(f"order-statistic index {k} outside 1..{self.n}")
        return float(self.values[k - 1])


def spacing(sample: OrderStatSample, k: int) -> float:
    """Gap between the k-th and (k+1)-th largest values, 1 <= k <= n-1."""
    if not 1 <= k <= sample.n - 1:
        raise InputError(f"spacing index {k} outside 1..{sample.n - 1}")
    return float(sample.values[k - 1] - sample.values[k])


def harmonic_number(n: int) -> float:
    """Exact partial sum 1 + 1/2 + ... + 1/n."""
    if n < 1:
        raise InputError("harmonic number needs n >= 1")
    return math.fsum(1.0 / i for i in range(1, n + 1))


def _exponential_from_uniforms(u: np.ndarray) -> np.ndarray:
    # inverse CDF of the unit exponential; log1p keeps small tails exact
    return -np.log1p(-u)


def _suffix_sums(e: np.ndarray) -> np.ndarray:
    """Row-wise suffix sums of e[:, i] / (i+1): column k is Y_(k+1)."""
    n = e.shape[1]
    scaled = e / np.arange(1.0, n + 1.0)
    return np.cumsum(scaled[:, ::-1], axis=1)[:, ::-1]


def exponential_order_stats_batch(n: int, master_seed: int, first_stream: int,
                                  replicates: int) -> np.ndarray:
    """(replicates, n) matrix of descending exponential order statistics."""
    if n < 1:
        raise InputError("sample size must be >= 1")
    u = uniforms_batch(master_seed, first_stream, replicates, n)
    return _suffix_sums(_exponential_from_uniforms(u))


def order_stat_columns_batch(d: DistributionModel, n: int, ks, master_seed: int,
                             first_stream: int, replicates: int) -> np.ndarray:
    """Selected order statistics only: column j holds X_(ks[j]) per replicate.

    The exponential representation is computed in full but the family map is
    applied just to the requested columns (it is monotone, so selecting
    columns commutes with the transform).  This is what makes large-n
    Gaussian cells affordable: the bisection quantile runs on R * len(ks)
    points instead of R * n.
    """
    ks = [int(k) for k in ks]
    if any(not 1 <= k <= n for k in ks):
        raise InputError(f"order-statistic indices {ks} outside 1..{n}")
    y = exponential_order_stats_batch(n, master_seed, first_stream, replicates)
    cols = y[:, [k - 1 for k in ks]]
    if isinstance(d, Exponential):
        return cols
    return d.u_transform_log(cols)


def sample_exponential_order_stats(n: int, rng: RngStream) -> OrderStatSample:
    """One exponential replicate via the suffix-sum representation."""
    values = exponential_order_stats_batch(n, rng.master_seed, rng.stream_index, 1)[0]
    return OrderStatSample(values=values, n=n, sampler="renyi",
                           master_seed=rng.master_seed, stream_index=rng.stream_index)


def sample_order_stats_renyi(d: DistributionModel, n: int,
                             rng: RngStream) -> OrderStatSample:
    """One replicate of family ``d`` as U(exp(.)) of exponential order stats."""
    base = exponential_order_stats_batch(n, rng.master_seed, rng.stream_index, 1)[0]
    values = base if isinstance(d, Exponential) else np.asarray(d.u_transform_log(base))
    return OrderStatSample(values=values, n=n, sampler="renyi",
                           master_seed=rng.master_seed, stream_index=rng.stream_index)


def direct_order_stats_batch(d: DistributionModel, n: int, master_seed: int,
                             first_stream: int, replicates: int) -> np.ndarray:
    """(replicates, n) descending matrix from i.i.d. inverse-CDF draws."""
    if n < 1:
        raise InputError("sample size must be >= 1")
    u = uniforms_batch(master_seed, first_stream, replicates, n)
    x = np.asarray(d.quantile(u))
    x.sort(axis=1)
    return x[:, ::-1]


def direct_max_batch(d: DistributionModel, n: int, master_seed: int,
                     first_stream: int, replicates: int) -> np.ndarray:
    """Per-replicate maxima of the direct sampler.

    Identical in value to ``direct_order_stats_batch(...)[:, 0]``: the
    quantile map is non-decreasing, so the maximum draw is the image of the
    maximum uniform, and only that one point needs transforming.
    """
    if n < 1:
        raise InputError("sample size must be >= 1")
    u = uniforms_batch(master_seed, first_stream, replicates, n)
    return np.asarray(d.quantile(u.max(axis=1)))


def sample_order_stats_direct(d: DistributionModel, n: int,
                              rng: RngStream) -> OrderStatSample:
    """One replicate via plain i.i.d. inverse-CDF sampling, sorted descending."""
    values = direct_order_stats_batch(d, n, rng.master_seed, rng.stream_index, 1)[0]
    return OrderStatSample(values=values, n=n, sampler="direct",
                           master_seed=rng.master_seed, stream_index=rng.stream_index)
