"""Test-statistic construction and comparison against the IID reference.

A *test statistic* is the distribution of one metric over ``m`` batches.
The reference statistic comes from fresh IID batches of size ``n`` (or
independent IID batch pairs, for two-sample metrics); the user statistic
comes from ``m`` contiguous chunks of the user's samples, each holding an
effective sample size of ``n``. The comparison expresses the user mean in
units of the reference spread.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ParameterError, UnsupportedMetricError
from .metrics import basic
from .metrics.mmd import MEDIAN, mmd_exact, mmd_rff, median_heuristic
from .metrics.swd import SWDConfig, sliced_wasserstein
from .samples import SampleBatch, partition, weighted_resample
from .seeding import child_seed
from .targets import Target, sample_iid

ROLE_REFERENCE = "iid-reference"
ROLE_USER = "user"

BANDS = ("1σ", "2σ", "3σ", ">3σ")
DEGENERATE_STD = 1e-300

DEFAULT_M = 100
DEFAULT_N = 10_000

# name -> (arity, default parameters)
_METRICS = {
    "marginal_mean": ("one-sample", {}),
    "marginal_variance": ("one-sample", {}),
    "chi_square": ("one-sample", {"bins": basic.DEFAULT_BINS}),
    "swd": ("two-sample", {"p": 1.0, "L": 50, "seed": 0}),
    "mmd": ("two-sample", {"sigma": MEDIAN, "cap": 1000, "seed": 0}),
    "mmd_rff": ("two-sample", {"sigma": MEDIAN, "D": 1000, "cap": 1000, "seed": 0}),
}
_ALIASES = {"mean": "marginal_mean", "variance": "marginal_variance", "chi2": "chi_square"}
_INT_PARAMS = {"bins", "L", "D", "cap", "seed"}


def _fmt(v) -> str:
    return v if isinstance(v, str) else format(v, "g")


@dataclass(frozen=True)
class MetricDescriptor:
    """A metric name plus its complete, normalised hyperparameters."""

    name: str
    params: tuple[tuple[str, object], ...] = ()

    @property
    def arity(self) -> str:
        return _METRICS[self.name][0]

    @property
    def two_sample(self) -> bool:
        return self.arity == "two-sample"

    def param(self, key):
        return dict(self.params)[key]

    def label(self, component: Optional[int] = None) -> str:
        """Serialised metric name, e.g. ``marginal_mean[0]`` or ``swd(p=1,L=50)``."""
        if not self.two_sample:
            return f"{self.name}[{component}]"
        if self.name == "swd":
            return f"swd(p={_fmt(self.param('p'))},L={self.param('L')})"
        if self.name == "mmd":
            return f"mmd(σ={_fmt(self.param('sigma'))})"
        return f"mmd_rff(σ={_fmt(self.param('sigma'))},D={self.param('D')})"

    def labels(self, dim: int) -> list[str]:
        if self.two_sample:
            return [self.label()]
        return [self.label(i) for i in range(dim)]

    @classmethod
    def parse(cls, text: str) -> "MetricDescriptor":
        """Parse ``name[:key=value,...]``, e.g. ``swd:p=2,L=100`` or ``mmd_rff:sigma=median,D=500``."""
        name, _, rest = text.strip().partition(":")
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq:
                raise ParameterError(f"metric {text!r}: expected key=value, got {item!r}")
            params[key.strip()] = value.strip()
        return metric(name.strip(), **params)


def metric(name: str, **params) -> MetricDescriptor:
    """Build a descriptor, filling defaults and validating every parameter."""
    name = _ALIASES.get(name, name)
    if name not in _METRICS:
        raise ParameterError(f"unknown metric {name!r}; known: {', '.join(_METRICS)}")
    if "σ" in params:
        params["sigma"] = params.pop("σ")
    defaults = _METRICS[name][1]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ParameterError(f"metric {name!r} does not take {sorted(unknown)}; allowed: {sorted(defaults)}")
    full = dict(defaults)
    for key, value in params.items():
        try:
            if key == "sigma":
                value = MEDIAN if value == MEDIAN else float(value)
            elif key in _INT_PARAMS:
                value = int(value)
            else:
                value = float(value)
        except (TypeError, ValueError):
            raise ParameterError(f"metric {name!r}: bad value for {key}: {value!r}") from None
        full[key] = value
    if "bins" in full and full["bins"] < 1:
        raise ParameterError("bins must be positive")
    if name == "swd":
        SWDConfig(full["L"], full["p"], full["seed"])
    if "sigma" in full and full["sigma"] != MEDIAN and not full["sigma"] > 0:
        raise ParameterError(f"sigma must be positive or 'median', got {full['sigma']}")
    if "D" in full and full["D"] < 1:
        raise ParameterError("D must be positive")
    if "cap" in full and full["cap"] < 2:
        raise ParameterError("cap must be at least 2")
    return MetricDescriptor(name, tuple(sorted(full.items())))


def default_metrics() -> list[MetricDescriptor]:
    return [metric("marginal_mean"), metric("marginal_variance"), metric("swd"), metric("mmd")]


# --- evaluation --------------------------------------------------------------

def evaluate_one_sample(desc: MetricDescriptor, batch: SampleBatch, target: Target) -> np.ndarray:
    if desc.name == "marginal_mean":
        return basic.marginal_mean(batch)
    if desc.name == "marginal_variance":
        return basic.marginal_variance(batch)
    if desc.name == "chi_square":
        return basic.chi_square_marginal(batch, target, desc.param("bins"))
    raise ParameterError(f"{desc.name} is not a one-sample metric")


def evaluate_two_sample(desc: MetricDescriptor, x: SampleBatch, y: SampleBatch) -> tuple[float, Optional[float]]:
    """Returns ``(value, bandwidth)``; bandwidth is ``None`` unless it came from the median heuristic."""
    if desc.name == "swd":
        cfg = SWDConfig(desc.param("L"), desc.param("p"), desc.param("seed"))
        return sliced_wasserstein(x, y, cfg), None
    sigma = desc.param("sigma")
    heuristic = None
    if sigma == MEDIAN:
        sigma = heuristic = median_heuristic(x, y, desc.param("cap"), desc.param("seed"))
    if desc.name == "mmd":
        return mmd_exact(x, y, sigma), heuristic
    if desc.name == "mmd_rff":
        return mmd_rff(x, y, sigma, desc.param("D"), desc.param("seed")), heuristic
    raise ParameterError(f"{desc.name} is not a two-sample metric")


@dataclass(frozen=True, eq=False)
class TestStatistic:
    """Values of one metric over ``m`` batches, for one role."""

    __test__ = False  # not a pytest class

    testcase: str
    metric: str
    values: np.ndarray
    role: str
    bandwidths: Optional[np.ndarray] = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size < 2:
            raise ParameterError("a test statistic needs at least two batch values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.bandwidths is not None:
            b = np.array(self.bandwidths, dtype=float).reshape(-1)
            b.setflags(write=False)
            object.__setattr__(self, "bandwidths", b)

    @property
    def m(self) -> int:
        return self.values.size

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        return float(np.std(self.values, ddof=1))

    def __eq__(self, other):
        if not isinstance(other, TestStatistic):
            return NotImplemented
        bw_same = (self.bandwidths is None and other.bandwidths is None) or (
            self.bandwidths is not None
            and other.bandwidths is not None
            and np.array_equal(self.bandwidths, other.bandwidths)
        )
        return (
            (self.testcase, self.metric, self.role) == (other.testcase, other.metric, other.role)
            and np.array_equal(self.values, other.values)
            and bw_same
        )

    __hash__ = None


def _map(fn: Callable, items: Sequence, threads: Optional[int]) -> list:
    # results are always collected in input order
    workers = threads or os.cpu_count() or 1
    if workers <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_metrics(target: Target, metrics: Iterable[MetricDescriptor]) -> list[MetricDescriptor]:
    metrics = list(metrics)
    if not metrics:
        raise ParameterError("at least one metric is required")
    for d in metrics:
        if d.name == "chi_square" and not target.has_analytic_marginals:
            raise UnsupportedMetricError(
                f"metric {d.name!r} is not supported for test case {target.name!r} (no analytic marginals)"
            )
    return metrics


def _evaluate_all(target, metrics, one: SampleBatch, pair: Optional[tuple[SampleBatch, SampleBatch]]):
    out = {}
    for d in metrics:
        if d.two_sample:
            out[d.label()] = evaluate_two_sample(d, *pair)
        else:
            for label, v in zip(d.labels(target.dim), evaluate_one_sample(d, one, target)):
                out[label] = (float(v), None)
    return out


def _assemble(target, metrics, rows: list[dict], role: str) -> list[TestStatistic]:
    stats = []
    for d in metrics:
        for label in d.labels(target.dim):
            vals = [r[label][0] for r in rows]
            bws = [r[label][1] for r in rows]
            bw = None if bws[0] is None else np.array(bws)
            stats.append(TestStatistic(target.name, label, np.array(vals), role, bw))
    return stats


def _check_sizes(m, n):
    if m < 2 or n < 2:
        raise ParameterError(f"need m >= 2 batches of n >= 2 samples, got m={m}, n={n}")


def build_teststatistic_iid(target: Target, metrics: Iterable[MetricDescriptor], m: int = DEFAULT_M,
                            n: int = DEFAULT_N, seed: int = 0, threads: Optional[int] = None) -> list[TestStatistic]:
    """Reference statistics from ``m`` fresh IID batches (or batch pairs) of size ``n``."""
    _check_sizes(m, n)
    metrics = _check_metrics(target, metrics)
    need_pair = any(d.two_sample for d in metrics)

    def job(b):
        xa = sample_iid(target, n, child_seed(seed, b, "iid-a"))
        pair = (xa, sample_iid(target, n, child_seed(seed, b, "iid-b"))) if need_pair else None
        return _evaluate_all(target, metrics, xa, pair)

    return _assemble(target, metrics, _map(job, range(m), threads), ROLE_REFERENCE)


def build_teststatistic_user(target: Target, metrics: Iterable[MetricDescriptor], m: int, n: int,
                             user: SampleBatch, seed: int = 0, threads: Optional[int] = None) -> list[TestStatistic]:
    """User statistics from ``m`` contiguous chunks of effective size ``n``.

    Two-sample metrics compare a fresh IID batch of size ``n`` with the
    chunk resampled to ``n`` unit-weight points.
    """
    _check_sizes(m, n)
    metrics = _check_metrics(target, metrics)
    if user.dim != target.dim:
        raise ParameterError(f"user samples have dimension {user.dim}, test case {target.name!r} has {target.dim}")
    chunks = partition(user, m, n)
    need_pair = any(d.two_sample for d in metrics)

    def job(b):
        chunk = chunks[b]
        pair = None
        if need_pair:
            ref = sample_iid(target, n, child_seed(seed, b, "user-ref"))
            pair = (ref, weighted_resample(chunk, n, child_seed(seed, b, "user-resample")))
        return _evaluate_all(target, metrics, chunk, pair)

    return _assemble(target, metrics, _map(job, range(m), threads), ROLE_USER)


# --- comparison ----------------------------------------------------------------

def normalize(value: float, ref_mean: float, ref_std: float) -> float:
    """``(value - ref_mean) / ref_std``; the raw difference if ``ref_std`` is (numerically) zero."""
    if ref_std < DEGENERATE_STD:
        return value - ref_mean
    return (value - ref_mean) / ref_std


def band(z: float) -> str:
    a = abs(z)
    if a <= 1:
        return BANDS[0]
    if a <= 2:
        return BANDS[1]
    if a <= 3:
        return BANDS[2]
    return BANDS[3]


@dataclass(frozen=True)
class MetricComparison:
    metric: str
    ref_mean: float
    ref_std: float
    user_mean: float
    user_std: float
    z: float
    std_ratio: float
    band: str
    degenerate: bool = False


@dataclass(frozen=True)
class ComparisonSummary:
    rows: tuple[MetricComparison, ...]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, metric: str) -> MetricComparison:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(metric)

    @property
    def metrics(self) -> list[str]:
        return [r.metric for r in self.rows]

    @property
    def passed(self) -> bool:
        """True if every metric lies within the 3 sigma band."""
        return all(r.band != BANDS[3] for r in self.rows)

    @property
    def max_abs_z(self) -> float:
        return max(abs(r.z) for r in self.rows)


def compare(ref: Sequence[TestStatistic], user: Sequence[TestStatistic]) -> ComparisonSummary:
    ref_by = {s.metric: s for s in ref}
    user_by = {s.metric: s for s in user}
    if list(ref_by) != list(user_by):
        raise ParameterError(
            f"reference and user statistics cover different metrics: {list(ref_by)} vs {list(user_by)}"
        )
    rows = []
    for name, r in ref_by.items():
        u = user_by[name]
        r_mean, r_std, u_mean, u_std = r.mean, r.std, u.mean, u.std
        degenerate = r_std < DEGENERATE_STD
        z = normalize(u_mean, r_mean, r_std)
        ratio = u_std if degenerate else u_std / r_std
        rows.append(MetricComparison(name, r_mean, r_std, u_mean, u_std, z, ratio, band(z), degenerate))
    return ComparisonSummary(tuple(rows))


def run_benchmark(target: Target, metrics: Iterable[MetricDescriptor], m: int, n: int, user: SampleBatch,
                  seed: int = 0, threads: Optional[int] = None):
    """Reference and user statistics plus their comparison, as ``(ref, user, summary)``."""
    metrics = list(metrics)
    ref = build_teststatistic_iid(target, metrics, m, n, seed, threads)
    usr = build_teststatistic_user(target, metrics, m, n, user, seed, threads)
    return ref, usr, compare(ref, usr)
