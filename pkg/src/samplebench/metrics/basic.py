"""Per-dimension descriptive metrics evaluated on one batch."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateInputError, ParameterError
from ..samples import SampleBatch, ess
from ..targets import Target

DEFAULT_BINS = 50


def marginal_mean(batch: SampleBatch) -> np.ndarray:
    """Weighted mean of each coordinate."""
    w = batch.weight_array
    return w @ batch.points / w.sum()


def marginal_variance(batch: SampleBatch) -> np.ndarray:
    """Weighted population variance ``sum w (x - xbar)^2 / sum w`` per coordinate."""
    if batch.n < 2:
        raise DegenerateInputError("variance needs at least two points")
    w = batch.weight_array
    resid = batch.points - marginal_mean(batch)
    return w @ (resid * resid) / w.sum()


def quantile_edges(target: Target, dim: int, bins: int) -> np.ndarray:
    """Inner edges splitting the target marginal into ``bins`` equal-probability bins."""
    probs = np.arange(1, bins) / bins
    return np.asarray(target.marginal_quantile(dim, probs), dtype=float)


def chi_square_marginal(batch: SampleBatch, target: Target, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Pearson statistic of each marginal against equal-probability target bins.

    Observed bin weights are rescaled to sum to ``ess(batch)``, so the
    expected content of every bin is ``ess / bins``.
    """
    if bins < 1:
        raise ParameterError(f"bins must be positive, got {bins}")
    if batch.dim != target.dim:
        raise ParameterError(f"batch dimension {batch.dim} does not match target dimension {target.dim}")
    w = batch.weight_array
    n_eff = ess(batch)
    expected = n_eff / bins
    out = np.empty(batch.dim)
    for j in range(batch.dim):
        edges = quantile_edges(target, j, bins)
        idx = np.searchsorted(edges, batch.points[:, j], side="right")
        observed = np.bincount(idx, weights=w, minlength=bins) * (n_eff / w.sum())
        out[j] = np.sum((observed - expected) ** 2) / expected
    return out
