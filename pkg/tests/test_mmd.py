import math

import numpy as np
import pytest

from samplebench.errors import DegenerateInputError, ParameterError
from samplebench.metrics import MMDConfig, gaussian_kernel, median_heuristic, mmd, mmd_exact, mmd_rff
from samplebench.metrics.mmd import rff_features, rff_parameters


def direct_mmd(x, y, sigma):
    """Plain double loop over all pairs."""
    def k(a, b):
        return math.exp(-np.sum((a - b) ** 2) / (2 * sigma ** 2))
    kxx = sum(k(a, b) for a in x for b in x) / len(x) ** 2
    kyy = sum(k(a, b) for a in y for b in y) / len(y) ** 2
    kxy = sum(k(a, b) for a in x for b in y) / (len(x) * len(y))
    return math.sqrt(max(kxx + kyy - 2 * kxy, 0.0))


def test_kernel_values():
    assert gaussian_kernel([1, 2], [1, 2], 0.7) == 1.0
    assert gaussian_kernel([0, 0], [1, 1], 1.0) == pytest.approx(math.exp(-1), abs=1e-16)
    assert gaussian_kernel([0.0], [100.0], 1.0) < 1e-300
    with pytest.raises(ParameterError):
        gaussian_kernel([0], [1], 0.0)
    with pytest.raises(ParameterError):
        gaussian_kernel([0], [1], -1.0)


def test_median_heuristic_hand_values():
    assert median_heuristic([0.0, 1.0], [3.0]) == 2.0
    assert median_heuristic([0.0], [1.0]) == 1.0
    with pytest.raises(DegenerateInputError):
        median_heuristic(np.ones((4, 2)), np.ones((3, 2)))


def test_median_heuristic_argument_order():
    rng = np.random.default_rng(0)
    X, Y = rng.standard_normal((700, 2)), rng.standard_normal((700, 2))
    assert median_heuristic(X, Y) == median_heuristic(Y, X)


def test_mmd_singletons():
    assert mmd_exact([[0.0, 0.0]], [[1.0, 1.0]], 1.0) == pytest.approx(math.sqrt(2 - 2 * math.exp(-1)), abs=1e-12)


def test_mmd_identical_sets():
    X = np.random.default_rng(1).standard_normal((300, 3))
    assert mmd_exact(X, X, 1.3) <= 1e-9
    assert mmd_rff(X, X, 1.3, 50, seed=4) == 0.0


def test_mmd_matches_double_loop():
    rng = np.random.default_rng(2)
    x, y = rng.standard_normal((30, 2)), rng.standard_normal((25, 2)) + 0.5
    assert mmd_exact(x, y, 0.8) == pytest.approx(direct_mmd(x, y, 0.8), rel=1e-12)


def test_mmd_blocked_sum_beyond_one_block():
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal((1500, 1)), rng.standard_normal((1100, 1)) + 0.1
    d2 = lambda a, b: (a - b.T) ** 2
    k = lambda a, b: np.exp(-d2(a, b) / 2).mean()
    expect = math.sqrt(k(x, x) + k(y, y) - 2 * k(x, y))
    assert mmd_exact(x, y, 1.0) == pytest.approx(expect, rel=1e-10)


def test_mmd_bitwise_symmetric():
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal((200, 2)), rng.standard_normal((200, 2))
    assert mmd_exact(x, y, 1.0) == mmd_exact(y, x, 1.0)
    assert mmd(x, y) == mmd(y, x)


def test_mmd_detects_shift_against_null():
    rng = np.random.default_rng(5)
    null = []
    for _ in range(100):
        a, b = rng.standard_normal(500), rng.standard_normal(500)
        null.append(mmd(a, b)[0])
    alt = mmd(rng.standard_normal(500), rng.standard_normal(500) + 5)[0]
    assert alt > np.percentile(null, 99)


def test_rff_kernel_approximation():
    omega, b = rff_parameters(2, 1.0, 20000, seed=0)
    x = np.array([[0.0, 0.0], [1.0, 1.0], [0.3, -0.2]])
    z = rff_features(x, omega, b)
    approx = z @ z.T
    exact = np.array([[gaussian_kernel(a, c, 1.0) for c in x] for a in x])
    np.testing.assert_allclose(approx, exact, atol=0.03)


def test_rff_single_feature_finite():
    rng = np.random.default_rng(6)
    v = mmd_rff(rng.standard_normal((20, 2)), rng.standard_normal((20, 2)), 1.0, 1, seed=0)
    assert math.isfinite(v) and v >= 0


def test_rff_converges_to_exact():
    rng = np.random.default_rng(7)
    x, y = rng.standard_normal((400, 2)), rng.standard_normal((400, 2)) + [1.0, 0.0]
    exact = mmd_exact(x, y, 1.0)
    err = [np.mean([abs(mmd_rff(x, y, 1.0, D, s) - exact) for s in range(10)]) / exact for D in (10, 100, 1000)]
    assert err[0] > err[1] > err[2]


def test_config_validation():
    with pytest.raises(ParameterError):
        MMDConfig(bandwidth="mean")
    with pytest.raises(ParameterError):
        MMDConfig(bandwidth=-1.0)
    with pytest.raises(ParameterError):
        MMDConfig(mode="fast")
    with pytest.raises(ParameterError):
        mmd_exact(np.zeros((3, 2)), np.zeros((3, 3)), 1.0)


def test_rff_cost_grows_linearly():
    import time
    rng = np.random.default_rng(8)

    def cost(n):
        x, y = rng.standard_normal((n, 2)), rng.standard_normal((n, 2))
        t0 = time.perf_counter()
        for _ in range(3):
            mmd_rff(x, y, 1.0, 100, 0)
        return time.perf_counter() - t0

    cost(1000)
    small, big = cost(4000), cost(16000)
    # exact MMD would grow 16x; RFF stays near 4x
    assert big / small < 10
