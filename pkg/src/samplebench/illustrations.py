"""Small synthetic 2D datasets for studying the estimators themselves.

They are not benchmark targets; the demos and the convergence checks use
them to look at Monte Carlo error as a function of projection and
feature counts.
"""

import numpy as np


def gaussian_vs_mixture_2d(n: int, seed=0):
    """``n`` points from a standard 2D normal and ``n`` from a two-component mixture.

    The mixture has equal weights, components at ``(-2, 1)`` and
    ``(2, -1)`` and isotropic std 0.7, so it differs from the Gaussian in
    both location spread and orientation.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 2))
    centres = np.array([[-2.0, 1.0], [2.0, -1.0]])
    comp = rng.integers(0, 2, n)
    y = centres[comp] + 0.7 * rng.standard_normal((n, 2))
    return x, y


def bimodal_pair_2d(n: int, seed=0):
    """Two well separated bimodal sets: modes on the x axis versus modes on the y axis."""
    rng = np.random.default_rng(seed)

    def draw(centres):
        comp = rng.integers(0, 2, n)
        return np.asarray(centres)[comp] + 0.5 * rng.standard_normal((n, 2))

    p = draw([[-2.0, 0.0], [2.0, 0.0]])
    q = draw([[0.0, -2.0], [0.0, 2.0]])
    return p, q
