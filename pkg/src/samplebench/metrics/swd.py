"""Exact one-dimensional Wasserstein distance and its sliced Monte Carlo extension."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..samples import SampleBatch

DEFAULT_PROJECTIONS = 50


@dataclass(frozen=True)
class SWDConfig:
    n_projections: int = DEFAULT_PROJECTIONS
    p: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_projections < 1:
            raise ParameterError(f"number of projections must be positive, got {self.n_projections}")
        if not self.p >= 1:
            raise ParameterError(f"order p must be >= 1, got {self.p}")


def _check_p(p):
    if not p >= 1:
        raise ParameterError(f"order p must be >= 1, got {p}")


def _mean_power_gap(a_sorted: np.ndarray, b_sorted: np.ndarray, p: float) -> np.ndarray:
    """Row-wise ``mean |a - b|^p`` of sorted rows.

    The gaps are sorted before summation so the result depends only on the
    multiset of gaps: reversing both rows (projection onto ``-theta``)
    gives a bit-identical value.
    """
    gaps = np.abs(a_sorted - b_sorted)
    if p != 1:
        gaps = gaps**p
    gaps.sort(axis=-1)
    return gaps.sum(axis=-1) / gaps.shape[-1]


def _shifted_mean(v: np.ndarray) -> float:
    # exact when all entries are equal
    v0 = v[0]
    return float(v0 + (v - v0).sum() / v.shape[0])


def wasserstein_1d(xs, ys, p: float = 1.0) -> float:
    """``W_p`` between two equally sized empirical measures on the line."""
    _check_p(p)
    a = np.sort(np.asarray(xs, dtype=float).reshape(-1))
    b = np.sort(np.asarray(ys, dtype=float).reshape(-1))
    if a.shape != b.shape:
        raise ParameterError(f"sample sets must have equal size, got {a.size} and {b.size}")
    if a.size == 0:
        raise ParameterError("sample sets must be non-empty")
    return float(_mean_power_gap(a[None, :], b[None, :], p)[0] ** (1.0 / p))


def projection_directions(n: int, d: int, seed) -> np.ndarray:
    """``n`` directions uniform on the unit sphere in ``R^d`` (rows of the result)."""
    if d < 1 or n < 1:
        raise ParameterError("n and d must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0):
        bad = norms == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def sample_unit_sphere(d: int, seed) -> np.ndarray:
    return projection_directions(1, d, seed)[0]


def _unweighted_points(x, what: str) -> np.ndarray:
    if isinstance(x, SampleBatch):
        if not x.has_unit_weights:
            raise ParameterError(f"{what} is weighted; resample it to unit weights first")
        return x.points
    a = np.asarray(x, dtype=float)
    return a.reshape(-1, 1) if a.ndim == 1 else a


def sliced_wasserstein(X, Y, cfg: SWDConfig = SWDConfig()) -> float:
    """Monte Carlo sliced Wasserstein distance of order ``cfg.p``.

    Both inputs are projected on the same ``cfg.n_projections`` directions
    (drawn from ``cfg.seed``); per direction the sorted projections are
    matched, and the ``p``-th powers of the 1D distances are averaged
    before taking the ``p``-th root.
    """
    x = _unweighted_points(X, "X")
    y = _unweighted_points(Y, "Y")
    if x.shape[1] != y.shape[1]:
        raise ParameterError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    if x.shape[0] != y.shape[0]:
        raise ParameterError(f"sample sets must have equal size, got {x.shape[0]} and {y.shape[0]}")
    theta = projection_directions(cfg.n_projections, x.shape[1], cfg.seed)
    px = np.sort(theta @ x.T, axis=1)
    py = np.sort(theta @ y.T, axis=1)
    per_direction = _mean_power_gap(px, py, cfg.p)
    return _shifted_mean(per_direction) ** (1.0 / cfg.p)
