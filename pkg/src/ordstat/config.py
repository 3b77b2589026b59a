"""Experiment configuration: a flat key/value text format with one table
per experiment.

Grammar::

    # comment
    key = value value ...          top level: defaults for every table
    [table-name]                   starts one experiment
    key = value value ...          table-local settings

Recognized keys (grid-valued keys take whitespace-separated lists):

    suite       variance | tails | evt | gaussian | association | entropy
    family      exponential gaussian absgaussian gumbel gpd(<shape>) ...
    n           sample sizes
    k           order-statistic indices; the tokens n/2 and n/4 expand to
                ceil(n/2) and ceil(n/4) per sample size
    lambda      exponential-moment parameters
    t           tail levels
    z           lower-tail offsets (exponential lower-tail rows)
    trend_n     sample sizes for the shift-trend rows of the gaussian suite
    replicates  Monte Carlo replicates per cell
    seed        master seed
    out         report path (top level only; one CSV per invocation)
    bound_scale multiplies every bound value; a fault-injection hook for
                exit-code testing, leave at 1 for real runs

Values set on the command line via ``--set key=value`` are applied after
parsing and re-validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .distributions import DistributionModel, Exponential, GPD, parse_family
from .errors import ConfigError

__all__ = ["ExperimentConfig", "parse_config_text", "load_config", "apply_overrides"]

_SUITES = ("variance", "tails", "evt", "gaussian", "association", "entropy")
_GRID_KEYS = {"family", "n", "k", "lambda", "t", "z", "trend_n"}
_SCALAR_KEYS = {"suite", "replicates", "seed", "out", "bound_scale"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One validated experiment: a suite, its families, grids and seeding."""

    suite: str
    families: tuple[DistributionModel, ...] = ()
    n_grid: tuple[int, ...] = ()
    k_spec: tuple[str, ...] = ("1",)
    lambdas: tuple[float, ...] = (0.1, 0.5)
    t_grid: tuple[float, ...] = (1.0, 2.0, 4.0)
    z_grid: tuple[float, ...] = (1.0,)
    trend_n: tuple[int, ...] = (100, 1000, 10000, 100000)
    replicates: int = 10000
    master_seed: int = 42
    out_path: str | None = None
    bound_scale: float = 1.0
    name: str = "experiment"

    def resolve_ks(self, n: int) -> list[int]:
        """Expand the k tokens for one sample size, deduplicated and sorted."""
        ks = []
        for token in self.k_spec:
            if token == "n/2":
                ks.append(math.ceil(n / 2))
            elif token == "n/4":
                ks.append(math.ceil(n / 4))
            else:
                ks.append(int(token))
        return sorted(set(ks))

    def validate(self) -> None:
        """Check every grid value against the preconditions of its suite.

        Runs before any sampling; raises ConfigError with the offending
        cell spelled out.
        """
        if self.suite not in _SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; pick one of {_SUITES}")
        if self.replicates < 100:
            raise ConfigError("replicates must be >= 100")
        # empty grids are legal and simply produce an empty report
        if any(n < 1 for n in self.n_grid):
            raise ConfigError("sample sizes must be >= 1")
        for token in self.k_spec:
            if token not in ("n/2", "n/4"):
                try:
                    int(token)
                except ValueError:
                    raise ConfigError(f"bad k token {token!r}")
        if any(lam < 0 for lam in self.lambdas):
            raise ConfigError("lambda grid must be non-negative")
        if any(t < 0 for t in self.t_grid):
            raise ConfigError("t grid must be non-negative")
        getattr(self, f"_validate_{self.suite}")()

    def _each_nk(self):
        for n in self.n_grid:
            for k in self.resolve_ks(n):
                yield n, k

    def _require_nk_in_range(self):
        for n, k in self._each_nk():
            if not 1 <= k <= n - 1:
                raise ConfigError(f"k={k} outside 1..n-1 for n={n}")

    def _validate_variance(self):
        if any(n < 2 for n in self.n_grid):
            raise ConfigError("variance suite needs n >= 2")
        self._require_nk_in_range()

    def _validate_tails(self):
        if self.replicates < 1000:
            raise ConfigError("tail suites need replicates >= 1000")
        for d in self.families:
            if isinstance(d, Exponential):
                for n, k in self._each_nk():
                    for z in self.z_grid:
                        if not math.log(2.0) < z < math.log(n / k):
                            raise ConfigError(
                                f"z={z:g} outside (log 2, log(n/k)) at n={n}, k={k}")
            elif d.name == "absgaussian":
                if any(n < 2 for n in self.n_grid):
                    raise ConfigError("tail rows need n >= 2")
            else:
                raise ConfigError(
                    f"tail suite covers exponential and absgaussian, not {d.name}")

    def _validate_evt(self):
        for d in self.families:
            if isinstance(d, GPD):
                if d.gamma >= 0.5:
                    raise ConfigError("evt suite needs tail index gamma < 1/2")
            elif not isinstance(d, Exponential):
                raise ConfigError(
                    "evt suite runs on exponential or gpd families only "
                    f"(no exact auxiliary function for {d.name})")
        if any(n < 2 for n in self.n_grid):
            raise ConfigError("evt rows need n >= 2")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("evt suite expects a strictly increasing n grid")

    def _validate_gaussian(self):
        for d in self.families:
            if d.name != "gaussian":
                raise ConfigError("gaussian suite runs on the gaussian family")
        for n in self.n_grid:
            if not 11 <= n <= 10**6:
                raise ConfigError(f"gaussian suite needs n in [11, 1e6], got {n}")
        if any(t < 3 for t in self.t_grid):
            raise ConfigError("sandwich rows need t >= 3")
        if any(n < 2 for n in self.trend_n):
            raise ConfigError("trend rows need n >= 2")

    def _validate_association(self):
        self._require_nk_in_range()
        for d in self.families:
            if not d.monotone_hazard:
                raise ConfigError(
                    f"association suite needs non-decreasing hazard, {d.name} lacks it")

    def _validate_entropy(self):
        self._require_nk_in_range()


def parse_config_text(text: str, source: str = "<config>") -> list[ExperimentConfig]:
    """Parse the key/value + tables format into experiment configs."""
    defaults: dict[str, str] = {}
    tables: list[tuple[str, dict[str, str]]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError(f"{source}:{lineno}: empty table name")
            current = {}
            tables.append((name, current))
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in _GRID_KEYS | _SCALAR_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if current is None:
            defaults[key] = value
        else:
            if key == "out":
                raise ConfigError(f"{source}:{lineno}: 'out' is top level only")
            current[key] = value
    if not tables:
        tables = [("experiment", {})]
    configs = []
    for name, table in tables:
        merged = dict(defaults)
        merged.update(table)
        configs.append(_build(merged, name, source))
    return configs


def _build(raw: dict[str, str], name: str, source: str) -> ExperimentConfig:
    def split(key):
        return raw[key].split()

    try:
        kwargs: dict = {"name": name}
        if "suite" not in raw:
            raise ConfigError(f"{source}: table {name!r} does not specify a suite")
        kwargs["suite"] = raw["suite"].strip().lower()
        if "family" in raw:
            kwargs["families"] = tuple(parse_family(tok) for tok in split("family"))
        if "n" in raw:
            kwargs["n_grid"] = tuple(int(tok) for tok in split("n"))
        if "k" in raw:
            kwargs["k_spec"] = tuple(split("k"))
        if "lambda" in raw:
            kwargs["lambdas"] = tuple(float(tok) for tok in split("lambda"))
        if "t" in raw:
            kwargs["t_grid"] = tuple(float(tok) for tok in split("t"))
        if "z" in raw:
            kwargs["z_grid"] = tuple(float(tok) for tok in split("z"))
        if "trend_n" in raw:
            kwargs["trend_n"] = tuple(int(tok) for tok in split("trend_n"))
        if "replicates" in raw:
            kwargs["replicates"] = int(raw["replicates"])
        if "seed" in raw:
            kwargs["master_seed"] = int(raw["seed"])
        if "out" in raw:
            kwargs["out_path"] = raw["out"].strip()
        if "bound_scale" in raw:
            kwargs["bound_scale"] = float(raw["bound_scale"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: table {name!r}: {exc}") from exc
    return ExperimentConfig(**kwargs)


def load_config(path: str) -> list[ExperimentConfig]:
    """Read and parse a config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=path)


def apply_overrides(cfg: ExperimentConfig, overrides: list[str]) -> ExperimentConfig:
    """Apply ``key=value`` overrides from the command line, then re-parse."""
    raw: dict[str, str] = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        raw[key.lower()] = value
    updates: dict = {}
    try:
        for key, value in raw.items():
            if key == "suite":
                updates["suite"] = value.lower()
            elif key == "family":
                updates["families"] = tuple(parse_family(t) for t in value.split())
            elif key == "n":
                updates["n_grid"] = tuple(int(t) for t in value.split())
            elif key == "k":
                updates["k_spec"] = tuple(value.split())
            elif key == "lambda":
                updates["lambdas"] = tuple(float(t) for t in value.split())
            elif key == "t":
                updates["t_grid"] = tuple(float(t) for t in value.split())
            elif key == "z":
                updates["z_grid"] = tuple(float(t) for t in value.split())
            elif key == "trend_n":
                updates["trend_n"] = tuple(int(t) for t in value.split())
            elif key == "replicates":
                updates["replicates"] = int(value)
            elif key == "seed":
                updates["master_seed"] = int(value)
            elif key == "out":
                updates["out_path"] = value
            elif key == "bound_scale":
                updates["bound_scale"] = float(value)
            else:
                raise ConfigError(f"unknown override key {key!r}")
    except ValueError as exc:
        raise ConfigError(f"bad override value: {exc}") from exc
    return replace(cfg, **updates)
