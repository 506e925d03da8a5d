"""Catalog of IID-sampleable target distributions.

Every target exposes a vectorised log-density, an exact IID sampler and,
where a closed form exists, the CDF and quantile function of each
one-dimensional marginal.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .errors import NotFoundError, ParameterError, ProgressError, UnsupportedMetricError
from .samples import SampleBatch

LOG_2PI = math.log(2.0 * math.pi)

CONFIG_ENV_VAR = "SAMPLEBENCH_CONFIG"

# Rubin (1981) coaching data as distributed with posteriordb's eight_schools.
EIGHT_SCHOOLS_Y = (28.0, 8.0, -3.0, 7.0, -1.0, 1.0, 18.0, 12.0)
EIGHT_SCHOOLS_SIGMA = (15.0, 10.0, 16.0, 11.0, 9.0, 11.0, 10.0, 18.0)

DEFAULT_MIXTURE_OFFSET = 5.0
DEFAULT_MAX_ATTEMPTS = 10**8


@dataclass(frozen=True)
class CovarianceSpec:
    """Equicorrelation matrix ``r * J + (1 - r) * I`` of size ``dim``."""

    dim: int
    r: float = 0.0

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError(f"dimension must be positive, got {self.dim}")
        lo = -1.0 / (self.dim - 1) if self.dim > 1 else -math.inf
        # eigenvalues: 1 - r (multiplicity dim-1) and 1 - r + r*dim
        smallest = min(1.0 - self.r, 1.0 - self.r + self.r * self.dim) if self.dim > 1 else 1.0
        if not (lo < self.r < 1.0) or smallest <= 1e-10:
            raise ParameterError(
                f"correlation r={self.r} outside the admissible interval ({lo:g}, 1) for dimension {self.dim}"
            )

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.full((self.dim, self.dim), self.r)
        np.fill_diagonal(m, 1.0)
        m.setflags(write=False)
        return m

    @cached_property
    def cholesky(self) -> np.ndarray:
        c = np.linalg.cholesky(self.matrix)
        c.setflags(write=False)
        return c

    @cached_property
    def whitener(self) -> np.ndarray:
        """Inverse of the lower Cholesky factor."""
        w = np.linalg.inv(self.cholesky)
        w.setflags(write=False)
        return w

    @cached_property
    def logdet(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.cholesky))))


def build_covariance(k: int, r: float) -> np.ndarray:
    return np.array(CovarianceSpec(k, r).matrix)


Bounds = tuple[tuple[float, float], ...]


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    a = np.asarray(x, dtype=float)
    single = a.ndim <= 1
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != dim:
        raise ParameterError(f"point dimension {a.shape[-1]} does not match target dimension {dim}")
    return a, single


def _ret(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


@dataclass(frozen=True)
class Target:
    """Base class; subclasses implement the per-kind formulas."""

    name: str
    dim: int
    bounds: Bounds

    kind = "abstract"
    properties = ""

    def log_density(self, x):
        """Log density at ``x`` (shape ``(d,)`` -> float, ``(n, d)`` -> array)."""
        pts, single = _as_points(x, self.dim)
        return _ret(self._logpdf(pts), single)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def marginal_cdf(self, dim: int, x):
        self._check_dim_index(dim)
        return self._marginal_cdf(dim, np.asarray(x, dtype=float))

    def marginal_quantile(self, dim: int, q):
        self._check_dim_index(dim)
        return self._marginal_quantile(dim, np.asarray(q, dtype=float))

    @property
    def has_analytic_marginals(self) -> bool:
        return True

    def _check_dim_index(self, dim: int):
        if not 0 <= dim < self.dim:
            raise ParameterError(f"dimension index {dim} out of range for {self.dim}-dimensional target")

    def _logpdf(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _marginal_cdf(self, dim, x):
        raise NotImplementedError

    def _marginal_quantile(self, dim, q):
        raise NotImplementedError


@dataclass(frozen=True)
class NormalTarget(Target):
    """Multivariate normal with covariance ``scale^2 * (r J + (1-r) I)``."""

    mean: tuple[float, ...] = ()
    scale: float = 1.0
    correlation: float = 0.0

    def __post_init__(self):
        if len(self.mean) != self.dim:
            raise ParameterError(f"mean has length {len(self.mean)}, expected {self.dim}")
        if not self.scale > 0:
            raise ParameterError(f"normal scale must be positive, got {self.scale}")
        _ = self.cov.cholesky

    @property
    def kind(self):
        if self.dim == 1:
            return "normal-1d"
        return "normal-kd" if self.correlation == 0 else "correlated-normal-kd"

    @property
    def properties(self):
        return "unimodal" if self.correlation == 0 else f"unimodal, r={self.correlation:g}"

    @cached_property
    def cov(self) -> CovarianceSpec:
        return CovarianceSpec(self.dim, self.correlation)

    @cached_property
    def _mu(self) -> np.ndarray:
        return np.asarray(self.mean, dtype=float)

    @cached_property
    def _norm_const(self) -> float:
        return -0.5 * self.dim * LOG_2PI - 0.5 * self.cov.logdet - self.dim * math.log(self.scale)

    def _logpdf(self, pts):
        z = (pts - self._mu) @ self.cov.whitener.T / self.scale
        return self._norm_const - 0.5 * np.einsum("ij,ij->i", z, z)

    def sample(self, n, rng):
        z = rng.standard_normal((n, self.dim))
        return self._mu + self.scale * z @ self.cov.cholesky.T

    def _marginal_cdf(self, dim, x):
        return special.ndtr((x - self._mu[dim]) / self.scale)

    def _marginal_quantile(self, dim, q):
        return self._mu[dim] + self.scale * special.ndtri(q)


@dataclass(frozen=True)
class MixtureNormalTarget(Target):
    """Finite mixture of normals sharing one equicorrelated covariance."""

    means: tuple[tuple[float, ...], ...] = ()
    weights: tuple[float, ...] = ()
    correlation: float = 0.0

    kind = "mixture-normal-kd"

    def __post_init__(self):
        if len(self.means) != len(self.weights) or not self.weights:
            raise ParameterError("mixture needs one weight per component")
        if any(len(m) != self.dim for m in self.means):
            raise ParameterError("component means must match the target dimension")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ParameterError(f"mixture weights must be nonnegative and sum to 1, got {self.weights}")
        _ = self.cov.cholesky

    @property
    def properties(self):
        return f"multimodal, r={self.correlation:g}"

    @cached_property
    def cov(self) -> CovarianceSpec:
        return CovarianceSpec(self.dim, self.correlation)

    @cached_property
    def _mus(self) -> np.ndarray:
        return np.asarray(self.means, dtype=float)

    @cached_property
    def _log_w(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.weights, dtype=float))

    def component_log_densities(self, pts: np.ndarray) -> np.ndarray:
        """``(n, n_components)`` array of component log-densities."""
        const = -0.5 * self.dim * LOG_2PI - 0.5 * self.cov.logdet
        wpts = pts @ self.cov.whitener.T
        wmus = self._mus @ self.cov.whitener.T
        out = np.empty((pts.shape[0], len(self.weights)))
        for c, wm in enumerate(wmus):
            z = wpts - wm
            out[:, c] = const - 0.5 * np.einsum("ij,ij->i", z, z)
        return out

    def _logpdf(self, pts):
        # logaddexp.reduce is stable and avoids logsumexp's per-call overhead in MH loops
        return np.logaddexp.reduce(self.component_log_densities(pts) + self._log_w, axis=1)

    def sample(self, n, rng):
        comp = rng.choice(len(self.weights), size=n, p=np.asarray(self.weights))
        z = rng.standard_normal((n, self.dim))
        return self._mus[comp] + z @ self.cov.cholesky.T

    def _marginal_cdf(self, dim, x):
        x = np.asarray(x, dtype=float)
        w = np.asarray(self.weights)
        return np.sum(w * special.ndtr(x[..., None] - self._mus[:, dim]), axis=-1)

    def _marginal_quantile(self, dim, q):
        q = np.asarray(q, dtype=float)
        lo = np.full(q.shape, self._mus[:, dim].min() - 40.0)
        hi = np.full(q.shape, self._mus[:, dim].max() + 40.0)
        # bisection; 80 halvings of an interval < 1e3 wide reach < 1e-10
        while np.max(hi - lo, initial=0.0) > 1e-11:
            mid = 0.5 * (lo + hi)
            below = self._marginal_cdf(dim, mid) < q
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CauchyTarget(Target):
    location: float = 0.0
    scale: float = 1.0

    kind = "cauchy-1d"
    properties = "unimodal, heavy-tailed"

    def __post_init__(self):
        if self.dim != 1:
            raise ParameterError("Cauchy target is one-dimensional")
        if not self.scale > 0:
            raise ParameterError(f"Cauchy scale must be positive, got {self.scale}")

    def _logpdf(self, pts):
        z = (pts[:, 0] - self.location) / self.scale
        return -math.log(math.pi * self.scale) - np.log1p(z * z)

    def sample(self, n, rng):
        return self.location + self.scale * rng.standard_cauchy((n, 1))

    def _marginal_cdf(self, dim, x):
        return 0.5 + np.arctan((x - self.location) / self.scale) / math.pi

    def _marginal_quantile(self, dim, q):
        return self.location + self.scale * np.tan(math.pi * (q - 0.5))


@dataclass(frozen=True)
class EightSchoolsTarget(Target):
    """Hierarchical coaching-effects posterior over ``(mu, tau, theta_1..theta_8)``.

    Prior: ``mu ~ N(0, 5)``, ``tau ~ HalfCauchy(0, 5)``,
    ``theta_i ~ N(mu, tau)``; likelihood ``y_i ~ N(theta_i, sigma_i)``.
    IID draws come from accept-reject against the prior with acceptance
    probability ``L / L_max``.
    """

    y: tuple[float, ...] = EIGHT_SCHOOLS_Y
    sigma: tuple[float, ...] = EIGHT_SCHOOLS_SIGMA
    prior_scale: float = 5.0
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    kind = "eight-schools"
    properties = "hierarchical, funnel"

    def __post_init__(self):
        if self.dim != 10:
            raise ParameterError("eight schools has 10 parameters (mu, tau, theta_1..8)")
        if len(self.y) != 8 or len(self.sigma) != 8:
            raise ParameterError("eight schools data vectors y and sigma must each have length 8")
        if any(not s > 0 for s in self.sigma):
            raise ParameterError("eight schools sigma values must be positive")

    @property
    def has_analytic_marginals(self) -> bool:
        return False

    @cached_property
    def _y(self):
        return np.asarray(self.y, dtype=float)

    @cached_property
    def _sigma(self):
        return np.asarray(self.sigma, dtype=float)

    def log_likelihood_ratio(self, theta: np.ndarray) -> np.ndarray:
        """``log(L / L_max)`` for an ``(n, 8)`` array of school effects."""
        r = (self._y - theta) / self._sigma
        return -0.5 * np.einsum("ij,ij->i", r, r)

    def _logpdf(self, pts):
        mu, tau, theta = pts[:, 0], pts[:, 1], pts[:, 2:]
        s = self.prior_scale
        out = np.full(pts.shape[0], -np.inf)
        ok = tau > 0
        if not np.any(ok):
            return out
        mu, tau, theta = mu[ok], tau[ok], theta[ok]
        lp = -0.5 * LOG_2PI - math.log(s) - 0.5 * (mu / s) ** 2
        lp += math.log(2.0 / (math.pi * s)) - np.log1p((tau / s) ** 2)
        z = (theta - mu[:, None]) / tau[:, None]
        lp += -4.0 * LOG_2PI - 8.0 * np.log(tau) - 0.5 * np.einsum("ij,ij->i", z, z)
        loglik_max = float(np.sum(-0.5 * LOG_2PI - np.log(self._sigma)))
        out[ok] = lp + loglik_max + self.log_likelihood_ratio(theta)
        return out

    def sample_prior(self, n: int, rng: np.random.Generator) -> np.ndarray:
        s = self.prior_scale
        mu = s * rng.standard_normal(n)
        tau = np.abs(s * rng.standard_cauchy(n))
        theta = mu[:, None] + tau[:, None] * rng.standard_normal((n, 8))
        return np.column_stack([mu, tau, theta])

    def sample(self, n, rng):
        accepted = []
        count = 0
        attempts = 0
        block = max(4096, 8 * n)
        while count < n:
            if attempts >= self.max_attempts:
                raise ProgressError(
                    f"accept-reject produced {count} of {n} samples within {self.max_attempts} attempts"
                )
            size = min(block, self.max_attempts - attempts)
            prop = self.sample_prior(size, rng)
            log_u = np.log(rng.random(size))
            keep = prop[(log_u < self.log_likelihood_ratio(prop[:, 2:])) & (prop[:, 1] > 0)]
            attempts += size
            accepted.append(keep)
            count += keep.shape[0]
        return np.concatenate(accepted)[:n]

    def _marginal_cdf(self, dim, x):
        raise UnsupportedMetricError(f"target {self.name!r} has no analytic marginal distributions")

    _marginal_quantile = _marginal_cdf


# --- functional interface ---------------------------------------------------

def log_density(target: Target, point):
    return target.log_density(point)


def sample_iid(target: Target, n: int, seed) -> SampleBatch:
    """Draw ``n`` exact IID samples; the output depends only on ``seed``."""
    if n < 1:
        raise ParameterError(f"sample size must be positive, got {n}")
    rng = np.random.default_rng(seed)
    return SampleBatch(target.sample(int(n), rng), source=f"iid:{target.name}")


def marginal_cdf(target: Target, dim: int, x):
    return target.marginal_cdf(dim, x)


def marginal_quantile(target: Target, dim: int, q):
    return target.marginal_quantile(dim, q)


# --- catalog ----------------------------------------------------------------

def _box(dim, lo, hi) -> Bounds:
    return tuple((float(lo), float(hi)) for _ in range(dim))


def load_config(path=None) -> dict:
    """Read a JSON config file; ``path=None`` falls back to ``$SAMPLEBENCH_CONFIG``.

    Recognised keys::

        {"eight_schools": {"y": [...8 values], "sigma": [...8 values]},
         "mixture_offset": 5.0}
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
        if not path:
            return {}
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ParameterError(f"{path}: config must be a JSON object")
    return cfg


def normal_kd(k: int, r: float = 0.0) -> NormalTarget:
    if r == 0:
        name = f"Normal-{k}D-Uncorrelated"
    else:
        name = f"Normal-{k}D-Correlated-r{r:g}"
    return NormalTarget(name, k, _box(k, -10, 10), mean=(0.0,) * k, correlation=r)


def mixture_normal_kd(k: int, r: float = 0.9, offset: float = DEFAULT_MIXTURE_OFFSET,
                      weights: Sequence[float] = (0.25, 0.75)) -> MixtureNormalTarget:
    """Two-mode mixture ``w0 N(offset*1, S) + w1 N(-offset*1, S)``."""
    name = f"Mixture-Normal-{k}D-r{r:g}"
    return MixtureNormalTarget(
        name, k, _box(k, -100, 100),
        means=((float(offset),) * k, (-float(offset),) * k),
        weights=tuple(float(w) for w in weights),
        correlation=r,
    )


def eight_schools(y=EIGHT_SCHOOLS_Y, sigma=EIGHT_SCHOOLS_SIGMA) -> EightSchoolsTarget:
    bounds = ((-50.0, 50.0), (0.0, 50.0)) + _box(8, -50, 50)
    return EightSchoolsTarget(
        "Eight-Schools", 10, bounds,
        y=tuple(float(v) for v in y), sigma=tuple(float(v) for v in sigma),
    )


def catalog(config: Optional[dict] = None) -> dict[str, Target]:
    """All built-in targets, keyed by their stable names, in listing order."""
    if config is None:
        config = load_config()
    offset = float(config.get("mixture_offset", DEFAULT_MIXTURE_OFFSET))
    es = config.get("eight_schools", {})

    entries: list[Target] = [NormalTarget("Normal-1D", 1, ((-10.0, 10.0),), mean=(0.0,))]
    entries += [normal_kd(k) for k in (2, 3, 10, 100)]
    entries += [normal_kd(k, r) for r in (0.2, 0.9) for k in (2, 10, 100)]
    entries += [mixture_normal_kd(k, 0.9, offset) for k in (3, 10)]
    entries.append(CauchyTarget("Cauchy-1D", 1, ((-10.0, 10.0),)))
    entries.append(eight_schools(es.get("y", EIGHT_SCHOOLS_Y), es.get("sigma", EIGHT_SCHOOLS_SIGMA)))
    return {t.name: t for t in entries}


def get_target(name: str, config: Optional[dict] = None) -> Target:
    cat = catalog(config)
    try:
        return cat[name]
    except KeyError:
        raise NotFoundError(f"unknown test case {name!r}; available: {', '.join(cat)}") from None
