"""ordstat: non-asymptotic variance and tail bounds for order statistics,
with exact samplers and a Monte Carlo verification harness.

The package has three layers:

* families and samplers (``distributions``, ``renyi``) built on a
  counter-based generator with a compiled kernel and a bit-identical
  NumPy fallback (``rng.kernel_backend()`` reports which one is active);
* deterministic bounds and limiting constants (``bounds``) next to the
  Monte Carlo estimators they are compared with (``estimators``);
* the verification harness and CLI (``harness``, ``cli``) that pair the
  two and emit deterministic CSV reports.
"""

from .distributions import (
    AbsGaussian,
    DistributionModel,
    Exponential,
    GPD,
    Gumbel,
    QuantileSandwich,
    StdGaussian,
    gauss_abs_hazard_floor,
    parse_family,
    u_tilde,
    u_tilde_sandwich,
)
from .errors import (
    ConfigError,
    DomainError,
    InputError,
    NumericalError,
    OrdstatError,
    PreconditionError,
    RangeError,
    UnsupportedError,
)
from .renyi import (
    OrderStatSample,
    harmonic_number,
    sample_exponential_order_stats,
    sample_order_stats_direct,
    sample_order_stats_renyi,
    spacing,
)
from .rng import RngStream, kernel_backend, substream_seed

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # families
    "DistributionModel", "Exponential", "StdGaussian", "AbsGaussian",
    "Gumbel", "GPD", "parse_family", "QuantileSandwich",
    "u_tilde", "u_tilde_sandwich", "gauss_abs_hazard_floor",
    # sampling
    "OrderStatSample", "RngStream", "harmonic_number", "spacing",
    "sample_exponential_order_stats", "sample_order_stats_renyi",
    "sample_order_stats_direct", "kernel_backend", "substream_seed",
    # errors
    "OrdstatError", "InputError", "DomainError", "RangeError",
    "PreconditionError", "UnsupportedError", "NumericalError", "ConfigError",
]
