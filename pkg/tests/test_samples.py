from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from samplebench.errors import CapacityError, FormatError, ParameterError
from samplebench.samples import (
    SampleBatch,
    chunk_length,
    collapse_repeats,
    efficiency,
    ess,
    partition,
    read_csv,
    weighted_resample,
    write_csv,
)


def _w(*w, d=1):
    return SampleBatch(np.arange(len(w) * d, dtype=float).reshape(len(w), d), np.array(w, dtype=float))


# --- ESS ------------------------------------------------------------------------

def test_ess_examples():
    assert ess(_w(1, 1, 1, 1)) == 4.0
    assert ess(_w(1, 1, 2)) == pytest.approx(16 / 6, abs=1e-15)
    assert ess(_w(1, 0, 0)) == 1.0
    assert ess(SampleBatch(np.zeros((7, 2)))) == 7.0


def test_ess_all_zero_weights():
    with pytest.raises(ParameterError):
        _w(0, 0, 0)


def test_ess_huge_weights_do_not_overflow():
    assert ess(_w(1e300, 1e300)) == pytest.approx(2.0, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30), st.floats(1e-3, 1e3))
def test_ess_scale_invariant_and_bounded(w, c):
    b = _w(*w)
    e = ess(b)
    assert 1 - 1e-9 <= e <= len(w) + 1e-9
    assert ess(_w(*(c * np.array(w)))) == pytest.approx(e, rel=1e-12)


def test_collapse_repeats_sums_weights():
    pts = np.array([[0.0], [0.0], [1.0], [1.0], [1.0], [0.0]])
    c = collapse_repeats(SampleBatch(pts))
    np.testing.assert_array_equal(c.points[:, 0], [0, 1, 0])
    np.testing.assert_array_equal(c.weights, [2, 3, 1])
    assert efficiency(c) < 1


def test_batch_is_read_only_and_reshapes_1d():
    b = SampleBatch([1.0, 2.0, 3.0])
    assert b.points.shape == (3, 1)
    with pytest.raises(ValueError):
        b.points[0, 0] = 5


# --- CSV --------------------------------------------------------------------------

def _write(tmp_path, text, name="s.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_read_csv_with_weight(tmp_path):
    b = read_csv(_write(tmp_path, "x_1,x_2,weight\n0.1,0.2,1.0\n"))
    np.testing.assert_array_equal(b.points, [[0.1, 0.2]])
    np.testing.assert_array_equal(b.weights, [1.0])
    assert b.source == "s.csv"


def test_read_csv_default_weights(tmp_path):
    b = read_csv(_write(tmp_path, "x_1\n1\n2\n3\n"))
    assert b.n == 3 and b.weights is None
    np.testing.assert_array_equal(b.weight_array, [1, 1, 1])


@pytest.mark.parametrize("text, row", [
    ("x_1,weight\n1,-2\n", 2),
    ("x_1,x_2\n1,2\n3,abc\n", 3),
    ("x_1,x_2\n1,2\n3\n", 3),
    ("x_1\n1\nnan\n", 3),
    ("x_2,weight\n1,1\n", 1),
    ("x_1,foo\n1,1\n", 1),
])
def test_read_csv_errors_name_row(tmp_path, text, row):
    with pytest.raises(FormatError, match=f"row {row}"):
        read_csv(_write(tmp_path, text))


def test_read_csv_empty(tmp_path):
    with pytest.raises(FormatError):
        read_csv(_write(tmp_path, ""))
    with pytest.raises(FormatError):
        read_csv(_write(tmp_path, "x_1\n", "h.csv"))


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    for w, ld in ((None, None), (rng.random(40), None), (rng.random(40), rng.standard_normal(40))):
        b = SampleBatch(rng.standard_normal((40, 3)) * 1e5, w, ld)
        p = tmp_path / "rt.csv"
        write_csv(b, p)
        header = p.read_text().splitlines()[0].split(",")
        assert ("weight" in header) == (w is not None)
        assert ("logpdf" in header) == (ld is not None)
        assert read_csv(p) == b


# --- partition -------------------------------------------------------------------

def test_partition_unweighted():
    b = SampleBatch(np.arange(10 ** 5, dtype=float))
    chunks = partition(b, 10, 10 ** 4)
    assert [c.n for c in chunks] == [10 ** 4] * 10
    np.testing.assert_array_equal(chunks[3].points[:, 0], np.arange(3 * 10 ** 4, 4 * 10 ** 4))


def test_partition_half_efficiency():
    # weights alternating 1,0 give rho = 0.5
    w = np.tile([1.0, 0.0], 300)
    b = SampleBatch(np.arange(600.0), w)
    assert efficiency(b) == pytest.approx(0.5, rel=1e-14)
    assert chunk_length(b, 100) == 200
    chunks = partition(b, 2, 100)
    assert [c.n for c in chunks] == [200, 200]


def test_partition_capacity_error_reports_sizes():
    b = SampleBatch(np.arange(100.0))
    with pytest.raises(CapacityError, match=r"need effective sample size 120.*available 100"):
        partition(b, 3, 40)


# --- resampling --------------------------------------------------------------------

def test_resample_equal_weights_identity():
    b = SampleBatch(np.arange(25.0).reshape(25, 1), np.full(25, 3.0))
    r = weighted_resample(b, 25, seed=4)
    assert r.weights is None
    np.testing.assert_array_equal(r.points, b.points)


def test_resample_degenerate_weight():
    b = SampleBatch(np.array([[1.0], [2.0]]), np.array([0.0, 1.0]))
    np.testing.assert_array_equal(weighted_resample(b, 4, seed=0).points[:, 0], [2, 2, 2, 2])


def test_resample_systematic_counts():
    b = SampleBatch(np.array([[1.0], [2.0]]), np.array([1.0, 3.0]))
    for seed in range(20):
        got = Counter(weighted_resample(b, 4, seed).points[:, 0].tolist())
        assert got == Counter({1.0: 1, 2.0: 3})


def test_resample_unbiased_over_seeds():
    # systematic resampling keeps each count within 1 of n*p and equal to it on average
    w = np.array([0.1, 0.45, 0.2, 0.25])
    b = SampleBatch(np.arange(4.0), w)
    counts = np.zeros((200, 4))
    for s in range(200):
        counts[s] = np.bincount(weighted_resample(b, 10, s).points[:, 0].astype(int), minlength=4)
    assert np.all(np.abs(counts - 10 * w) < 1 + 1e-12)
    np.testing.assert_allclose(counts.mean(axis=0), 10 * w, atol=0.15)
