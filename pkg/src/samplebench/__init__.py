"""Benchmark Monte Carlo samplers against exact IID draws from known targets."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DegenerateInputError,
    FormatError,
    NotFoundError,
    ParameterError,
    ProgressError,
    SampleBenchError,
    UnsupportedMetricError,
)
from .harness import (
    ComparisonSummary,
    MetricDescriptor,
    TestStatistic,
    build_teststatistic_iid,
    build_teststatistic_user,
    compare,
    default_metrics,
    metric,
    run_benchmark,
)
from .report import ReportDocument, make_report, merge_reports, read_report, write_report
from .samplers import MHConfig, metropolis_hastings
from .samples import SampleBatch, collapse_repeats, ess, partition, read_csv, weighted_resample, write_csv
from .targets import catalog, get_target, log_density, marginal_cdf, sample_iid
