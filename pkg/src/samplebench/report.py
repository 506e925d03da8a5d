"""JSON persistence of benchmark results.

Schema (version 1)::

    {"schema_version": 1, "tool_version": str, "testcase": str, "sampler": str,
     "seed": int, "m": int, "n": int,
     "statistics": [{"role", "metric", "values": [...], "mean", "std"[, "bandwidths": [...]]}],
     "comparison": [{"metric", "z", "std_ratio", "band", "degenerate"}]}

Floats are written with Python's shortest round-trip representation, so
reading a file back yields bit-identical values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import __version__
from .errors import FormatError, ParameterError
from .harness import (
    ROLE_REFERENCE,
    ROLE_USER,
    ComparisonSummary,
    MetricComparison,
    TestStatistic,
    compare,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReportDocument:
    testcase: str
    sampler: str
    seed: int
    m: int
    n: int
    statistics: tuple[TestStatistic, ...]
    comparison: Optional[ComparisonSummary] = None
    tool_version: str = field(default=__version__)

    def select(self, role: str) -> list[TestStatistic]:
        return [s for s in self.statistics if s.role == role]

    @property
    def reference(self) -> list[TestStatistic]:
        return self.select(ROLE_REFERENCE)

    @property
    def user(self) -> list[TestStatistic]:
        return self.select(ROLE_USER)

    def statistic(self, metric: str, role: str) -> TestStatistic:
        for s in self.statistics:
            if s.metric == metric and s.role == role:
                return s
        raise ParameterError(
            f"no {role} statistic for metric {metric!r}; available: {', '.join(self.metric_names())}"
        )

    def metric_names(self) -> list[str]:
        names = []
        for s in self.statistics:
            if s.metric not in names:
                names.append(s.metric)
        return names


def make_report(testcase: str, sampler: str, seed: int, m: int, n: int, reference, user=None) -> ReportDocument:
    stats = tuple(reference) + tuple(user or ())
    summary = compare(reference, user) if user else None
    return ReportDocument(testcase, sampler, int(seed), int(m), int(n), stats, summary)


def _stat_to_json(s: TestStatistic) -> dict:
    rec = {
        "role": s.role,
        "metric": s.metric,
        "values": [float(v) for v in s.values],
        "mean": s.mean,
        "std": s.std,
    }
    if s.bandwidths is not None:
        rec["bandwidths"] = [float(v) for v in s.bandwidths]
    return rec


def to_json(doc: ReportDocument) -> str:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": doc.tool_version,
        "testcase": doc.testcase,
        "sampler": doc.sampler,
        "seed": doc.seed,
        "m": doc.m,
        "n": doc.n,
        "statistics": [_stat_to_json(s) for s in doc.statistics],
        "comparison": [
            {
                "metric": r.metric,
                "z": float(r.z),
                "std_ratio": float(r.std_ratio),
                "band": r.band,
                "degenerate": bool(r.degenerate),
            }
            for r in (doc.comparison or ())
        ],
    }
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    v = obj[key]
    if kind is float and isinstance(v, int) and not isinstance(v, bool):
        v = float(v)
    if not isinstance(v, kind) or isinstance(v, bool) and kind is not bool:
        raise FormatError(f"{where}: field {key!r} has wrong type {type(v).__name__}")
    return v


def from_json(text: str) -> ReportDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError("report must be a JSON object")
    if "schema_version" not in obj:
        raise FormatError("report has no schema_version field")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {obj['schema_version']!r} (expected {SCHEMA_VERSION})")

    stats = []
    for i, rec in enumerate(_require(obj, "statistics", list, "report")):
        where = f"statistics[{i}]"
        if not isinstance(rec, dict):
            raise FormatError(f"{where}: not an object")
        values = _require(rec, "values", list, where)
        bws = rec.get("bandwidths")
        try:
            stats.append(TestStatistic(
                _require(obj, "testcase", str, "report"),
                _require(rec, "metric", str, where),
                np.array(values, dtype=float),
                _require(rec, "role", str, where),
                None if bws is None else np.array(bws, dtype=float),
            ))
        except (ValueError, TypeError) as exc:
            raise FormatError(f"{where}: {exc}") from None

    stat_by = {(s.role, s.metric): s for s in stats}
    rows = []
    for i, rec in enumerate(_require(obj, "comparison", list, "report")):
        where = f"comparison[{i}]"
        name = _require(rec, "metric", str, where)
        ref = stat_by.get((ROLE_REFERENCE, name))
        usr = stat_by.get((ROLE_USER, name))
        if ref is None or usr is None:
            raise FormatError(f"{where}: metric {name!r} lacks reference or user statistics")
        rows.append(MetricComparison(
            name, ref.mean, ref.std, usr.mean, usr.std,
            _require(rec, "z", float, where),
            _require(rec, "std_ratio", float, where),
            _require(rec, "band", str, where),
            bool(rec.get("degenerate", False)),
        ))

    return ReportDocument(
        testcase=_require(obj, "testcase", str, "report"),
        sampler=_require(obj, "sampler", str, "report"),
        seed=_require(obj, "seed", int, "report"),
        m=_require(obj, "m", int, "report"),
        n=_require(obj, "n", int, "report"),
        statistics=tuple(stats),
        comparison=ComparisonSummary(tuple(rows)) if rows else None,
        tool_version=_require(obj, "tool_version", str, "report"),
    )


def write_report(doc: ReportDocument, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_json(doc))


def read_report(path) -> ReportDocument:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def merge_reports(a: ReportDocument, b: ReportDocument) -> ReportDocument:
    """Concatenate the per-batch values of two runs of the same configuration.

    Statistics are matched on ``(role, metric)``; summaries and the
    comparison are recomputed from the merged values.
    """
    if (a.testcase, a.sampler, a.n) != (b.testcase, b.sampler, b.n):
        raise ParameterError("can only merge reports with the same test case, sampler and batch size")
    keys_a = [(s.role, s.metric) for s in a.statistics]
    keys_b = [(s.role, s.metric) for s in b.statistics]
    if keys_a != keys_b:
        raise ParameterError("reports cover different metrics")

    merged = []
    for sa, sb in zip(a.statistics, b.statistics):
        bw = None
        if sa.bandwidths is not None and sb.bandwidths is not None:
            bw = np.concatenate([sa.bandwidths, sb.bandwidths])
        merged.append(replace(sa, values=np.concatenate([sa.values, sb.values]), bandwidths=bw))
    ref = [s for s in merged if s.role == ROLE_REFERENCE]
    usr = [s for s in merged if s.role == ROLE_USER]
    return ReportDocument(
        a.testcase, a.sampler, a.seed, a.m + b.m, a.n, tuple(merged),
        compare(ref, usr) if ref and usr else None, a.tool_version,
    )
