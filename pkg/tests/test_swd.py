import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from samplebench.errors import ParameterError
from samplebench.metrics import SWDConfig, projection_directions, sample_unit_sphere, sliced_wasserstein, wasserstein_1d
from samplebench.samples import SampleBatch


def brute_force_w(xs, ys, p):
    """Optimal assignment by enumerating every permutation."""
    n = len(xs)
    best = min(sum(abs(xs[i] - ys[j]) ** p for i, j in enumerate(perm)) for perm in itertools.permutations(range(n)))
    return (best / n) ** (1.0 / p)


def test_w1d_hand_values():
    assert wasserstein_1d([0, 0], [1, 1], p=1) == 1.0
    assert wasserstein_1d([0, 1], [1, 0], p=2) == 0.0
    x = np.random.default_rng(0).standard_normal(17)
    assert wasserstein_1d(x, x[::-1]) == 0.0


def test_w1d_unequal_sizes():
    with pytest.raises(ParameterError):
        wasserstein_1d([0, 1], [0, 1, 2])


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_w1d_matches_brute_force(p):
    rng = np.random.default_rng(int(p))
    for _ in range(30):
        n = int(rng.integers(1, 8))
        xs, ys = rng.standard_normal(n), rng.standard_normal(n) * 2
        assert wasserstein_1d(xs, ys, p) == pytest.approx(brute_force_w(xs, ys, p), abs=1e-12)


def test_unit_sphere():
    assert sample_unit_sphere(1, 3)[0] in (-1.0, 1.0)
    for s in range(20):
        assert abs(np.linalg.norm(sample_unit_sphere(3, s)) - 1) < 1e-12
    th = projection_directions(10 ** 4, 2, seed=5)
    assert np.linalg.norm(th.mean(axis=0)) < 0.05


def test_swd_identity():
    X = np.random.default_rng(1).standard_normal((100, 4))
    for L, p, s in ((1, 1, 0), (50, 2, 3), (7, 1.5, 11)):
        assert sliced_wasserstein(X, X, SWDConfig(L, p, s)) == 0.0


def test_swd_1d_equals_w1d_for_any_L():
    rng = np.random.default_rng(2)
    for L in (1, 2, 50, 333):
        x, y = rng.standard_normal(40), rng.standard_normal(40) + 1
        assert sliced_wasserstein(x, y, SWDConfig(L, 1.0, L)) == wasserstein_1d(x, y)


def test_swd_translation_matches_per_direction_oracle():
    X = np.random.default_rng(3).standard_normal((1000, 2))
    Y = X + np.array([2.0, 0.0])
    cfg = SWDConfig(50, 1.0, 7)
    th = projection_directions(50, 2, 7)
    oracle = np.mean(np.abs(2 * th[:, 0]))
    assert abs(sliced_wasserstein(X, Y, cfg) - oracle) <= 0.15 * oracle


def test_swd_rejects_bad_input():
    X = np.zeros((5, 2))
    with pytest.raises(ParameterError):
        sliced_wasserstein(X, np.zeros((6, 2)))
    with pytest.raises(ParameterError):
        sliced_wasserstein(X, np.zeros((5, 3)))
    with pytest.raises(ParameterError):
        sliced_wasserstein(SampleBatch(X, [1, 2, 1, 1, 1]), X)
    with pytest.raises(ParameterError):
        SWDConfig(n_projections=0)


def test_swd_same_directions_for_both_inputs():
    # symmetry is exact only because X and Y share the projection set
    rng = np.random.default_rng(4)
    X, Y = rng.standard_normal((64, 3)), rng.standard_normal((64, 3)) + 0.3
    assert sliced_wasserstein(X, Y) == sliced_wasserstein(Y, X)


point_sets = arrays(np.float64, (12, 2), elements=st.floats(-50, 50, allow_nan=False, width=64))


@settings(max_examples=60, deadline=None)
@given(point_sets, point_sets, point_sets, st.integers(0, 2 ** 32))
def test_swd_metric_properties(x, y, z, seed):
    cfg = SWDConfig(20, 1.0, seed)
    dxy = sliced_wasserstein(x, y, cfg)
    assert dxy >= 0
    assert sliced_wasserstein(x, x, cfg) == 0.0
    assert dxy == sliced_wasserstein(y, x, cfg)
    assert dxy <= sliced_wasserstein(x, z, cfg) + sliced_wasserstein(z, y, cfg) + 1e-9
