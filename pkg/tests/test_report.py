import json

import numpy as np
import pytest

from samplebench import targets as T
from samplebench.errors import FormatError, ParameterError
from samplebench.harness import default_metrics, metric, run_benchmark
from samplebench.report import SCHEMA_VERSION, from_json, make_report, merge_reports, read_report, to_json, write_report


@pytest.fixture(scope="module")
def doc():
    t = T.get_target("Normal-2D-Uncorrelated")
    user = T.sample_iid(t, 4000, seed=77)
    ref, usr, _ = run_benchmark(t, default_metrics() + [metric("mmd_rff", D=50)], 8, 500, user, seed=1)
    return make_report(t.name, "file:u.csv", 1, 8, 500, ref, usr)


def test_round_trip_is_equal(doc, tmp_path):
    p = tmp_path / "r.json"
    write_report(doc, p)
    back = read_report(p)
    assert back == doc
    assert to_json(back) == to_json(doc)


def test_schema_fields(doc):
    obj = json.loads(to_json(doc))
    assert obj["schema_version"] == SCHEMA_VERSION
    assert {"tool_version", "testcase", "sampler", "seed", "m", "n", "statistics", "comparison"} <= set(obj)
    roles = {s["role"] for s in obj["statistics"]}
    assert roles == {"iid-reference", "user"}
    mmd = [s for s in obj["statistics"] if s["metric"] == "mmd(σ=median)"][0]
    assert len(mmd["bandwidths"]) == 8
    assert len(obj["comparison"]) == len(doc.metric_names())


def test_text_is_deterministic(doc):
    t = T.get_target("Normal-2D-Uncorrelated")
    user = T.sample_iid(t, 4000, seed=77)
    ref, usr, _ = run_benchmark(t, default_metrics() + [metric("mmd_rff", D=50)], 8, 500, user, seed=1)
    assert to_json(make_report(t.name, "file:u.csv", 1, 8, 500, ref, usr)) == to_json(doc)


@pytest.mark.parametrize("text", [
    "{not json",
    "[]",
    '{"testcase": "x"}',
    '{"schema_version": 99, "statistics": [], "comparison": []}',
])
def test_malformed_reports(text):
    with pytest.raises(FormatError):
        from_json(text)


def test_wrong_field_type(doc):
    obj = json.loads(to_json(doc))
    obj["m"] = "eight"
    with pytest.raises(FormatError, match="'m'"):
        from_json(json.dumps(obj))


def test_statistic_lookup(doc):
    s = doc.statistic("marginal_mean[1]", "user")
    assert s.role == "user" and s.m == 8
    with pytest.raises(ParameterError, match="available"):
        doc.statistic("nope", "user")


def test_merge_concatenates_values(doc):
    merged = merge_reports(doc, doc)
    assert merged.m == 16
    s = merged.statistic("swd(p=1,L=50)", "user")
    np.testing.assert_array_equal(s.values[:8], s.values[8:])
    assert merged.comparison["swd(p=1,L=50)"].user_mean == pytest.approx(doc.comparison["swd(p=1,L=50)"].user_mean)
