"""Gaussian-kernel maximum mean discrepancy, exact and via random Fourier features."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist, pdist

from ..errors import DegenerateInputError, ParameterError
from .swd import _unweighted_points

MEDIAN = "median"
DEFAULT_FEATURES = 1000
DEFAULT_HEURISTIC_CAP = 1000

# row-block size for kernel sums; fixed so reductions are reproducible
_BLOCK = 1024


@dataclass(frozen=True)
class MMDConfig:
    bandwidth: Union[float, str] = MEDIAN
    mode: str = "exact"
    n_features: int = DEFAULT_FEATURES
    seed: int = 0
    heuristic_cap: int = DEFAULT_HEURISTIC_CAP

    def __post_init__(self):
        if self.mode not in ("exact", "rff"):
            raise ParameterError(f"mode must be 'exact' or 'rff', got {self.mode!r}")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != MEDIAN:
                raise ParameterError(f"bandwidth must be positive or {MEDIAN!r}, got {self.bandwidth!r}")
        else:
            _check_sigma(self.bandwidth)
        if self.n_features < 1:
            raise ParameterError("feature count D must be positive")
        if self.heuristic_cap < 2:
            raise ParameterError("heuristic subsample cap must be at least 2")


def _check_sigma(sigma):
    if not (isinstance(sigma, (int, float, np.floating)) and sigma > 0 and math.isfinite(sigma)):
        raise ParameterError(f"kernel bandwidth must be a positive number, got {sigma!r}")


def gaussian_kernel(x, y, sigma: float) -> float:
    """``exp(-|x - y|^2 / (2 sigma^2))``."""
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise ParameterError(f"dimension mismatch: {x.size} vs {y.size}")
    diff = x - y
    return float(np.exp(-np.dot(diff, diff) / (2.0 * sigma * sigma)))


def median_heuristic(X, Y, cap: int = DEFAULT_HEURISTIC_CAP, seed=0) -> float:
    """Median Euclidean distance over all pairs of the pooled set ``X u Y``.

    Pooled sets larger than ``cap`` are subsampled without replacement.
    Rows are put in lexicographic order first, so the result does not
    depend on the order of the arguments.
    """
    pooled = np.vstack([_unweighted_points(X, "X"), _unweighted_points(Y, "Y")])
    pooled = pooled[np.lexsort(pooled.T[::-1])]
    if pooled.shape[0] > cap:
        rng = np.random.default_rng(seed)
        pooled = pooled[np.sort(rng.choice(pooled.shape[0], size=cap, replace=False))]
    if pooled.shape[0] < 2:
        raise DegenerateInputError("median heuristic needs at least two points")
    med = float(np.median(pdist(pooled)))
    if not med > 0:
        raise DegenerateInputError("median pairwise distance is zero; cannot set the kernel bandwidth")
    return med


def _kernel_sum(a: np.ndarray, b: np.ndarray, sigma: float) -> float:
    scale = -0.5 / (sigma * sigma)
    total = 0.0
    for i in range(0, a.shape[0], _BLOCK):
        d2 = cdist(a[i:i + _BLOCK], b, "sqeuclidean")
        total += float(np.exp(scale * d2).sum())
    return total


def _canonical_pair(x: np.ndarray, y: np.ndarray):
    # MMD is symmetric; evaluating in a fixed order makes it bitwise symmetric too
    kx = (x.shape[0], x.tobytes())
    ky = (y.shape[0], y.tobytes())
    return (y, x) if ky < kx else (x, y)


def mmd_exact(X, Y, sigma: float) -> float:
    """Biased (V-statistic) MMD with the Gaussian kernel, returned as the square root."""
    _check_sigma(sigma)
    x = _unweighted_points(X, "X")
    y = _unweighted_points(Y, "Y")
    if x.shape[1] != y.shape[1]:
        raise ParameterError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    x, y = _canonical_pair(x, y)
    n, m = x.shape[0], y.shape[0]
    kxx = _kernel_sum(x, x, sigma) / (n * n)
    kyy = _kernel_sum(y, y, sigma) / (m * m)
    kxy = _kernel_sum(x, y, sigma) / (n * m)
    return math.sqrt(max(kxx + kyy - 2.0 * kxy, 0.0))


def rff_parameters(d: int, sigma: float, n_features: int, seed):
    """Frequencies ``omega ~ N(0, sigma^-2 I)`` (shape ``(D, d)``) and offsets ``b ~ U(0, 2 pi)``."""
    _check_sigma(sigma)
    if n_features < 1:
        raise ParameterError("feature count D must be positive")
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n_features, d)) / sigma
    b = rng.uniform(0.0, 2.0 * math.pi, n_features)
    return omega, b


def rff_features(x: np.ndarray, omega: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Feature map ``z(x) = sqrt(2/D) cos(omega x + b)``, one row per point."""
    return math.sqrt(2.0 / omega.shape[0]) * np.cos(x @ omega.T + b)


def _mean_embedding(x, omega, b) -> np.ndarray:
    # same as rff_features(x).mean(axis=0), computed in place block by block
    acc = np.zeros(omega.shape[0])
    for i in range(0, x.shape[0], _BLOCK):
        arg = x[i:i + _BLOCK] @ omega.T
        arg += b
        np.cos(arg, out=arg)
        acc += arg.sum(axis=0)
    return acc * (math.sqrt(2.0 / omega.shape[0]) / x.shape[0])


def mmd_rff(X, Y, sigma: float, n_features: int = DEFAULT_FEATURES, seed=0) -> float:
    """Random-Fourier-feature MMD: distance between the two mean embeddings."""
    x = _unweighted_points(X, "X")
    y = _unweighted_points(Y, "Y")
    if x.shape[1] != y.shape[1]:
        raise ParameterError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    omega, b = rff_parameters(x.shape[1], sigma, n_features, seed)
    diff = _mean_embedding(x, omega, b) - _mean_embedding(y, omega, b)
    return float(np.sqrt(np.dot(diff, diff)))


def mmd(X, Y, cfg: MMDConfig = MMDConfig()) -> tuple[float, float]:
    """Evaluate MMD under ``cfg``; returns ``(value, bandwidth_used)``."""
    if cfg.bandwidth == MEDIAN:
        sigma = median_heuristic(X, Y, cfg.heuristic_cap, cfg.seed)
    else:
        sigma = float(cfg.bandwidth)
    if cfg.mode == "exact":
        return mmd_exact(X, Y, sigma), sigma
    return mmd_rff(X, Y, sigma, cfg.n_features, cfg.seed), sigma
