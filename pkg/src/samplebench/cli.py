"""Command-line interface: ``samplebench {list,sample,run,plot}``.

Exit codes::

    0  run finished, every metric within 3 sigma of the IID reference
    1  usage error (bad flags, unknown test case or metric)
    2  run finished, at least one metric deviates by more than 3 sigma
    3  data error (missing or malformed input file, sampler failure)
    4  capacity error (input has too few effective samples for m x n)
    5  metric not supported for the chosen test case
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import __version__
from .errors import (
    CapacityError,
    FormatError,
    NotFoundError,
    ParameterError,
    ProgressError,
    UnsupportedMetricError,
)
from .harness import DEFAULT_M, DEFAULT_N, MetricDescriptor, default_metrics, run_benchmark
from .plots import plot_overview, plot_teststatistic
from .report import make_report, read_report, write_report
from .samplers import MHConfig, metropolis_hastings
from .samples import collapse_repeats, ess, read_csv, write_csv
from .seeding import child_seed
from .targets import catalog, get_target, load_config, sample_iid

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_DEVIATION = 2
EXIT_DATA = 3
EXIT_CAPACITY = 4
EXIT_UNSUPPORTED = 5

REPORT_NAME = "report.json"
OVERVIEW_NAME = "overview.svg"

# built-in MH runs 8x the requested effective size by default, to absorb
# the efficiency loss from collapsing repeated states into weights
MH_OVERSAMPLE = 8
MH_MAX_DOUBLINGS = 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    testcase: str
    metrics: list[MetricDescriptor] = field(default_factory=default_metrics)
    m: int = DEFAULT_M
    n: int = DEFAULT_N
    seed: int = 0
    input_path: Optional[str] = None
    mh: Optional[MHConfig] = None
    collapse: bool = True
    out_dir: str = "."
    threads: Optional[int] = None
    config_path: Optional[str] = None
    # doublings of the MH run length allowed when its ESS falls short of m*n
    mh_extend: int = 0


def cmd_list(config_path: Optional[str] = None, out=None) -> int:
    out = out or sys.stdout
    rows = [(t.name, str(t.dim), t.kind, t.properties) for t in catalog(load_config(config_path)).values()]
    head = ("name", "dim", "kind", "properties")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
    for r in [head] + rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    return EXIT_PASS


def cmd_sample(testcase: str, n: int, seed: int, out_path: str, config_path: Optional[str] = None) -> int:
    target = get_target(testcase, load_config(config_path))
    write_csv(sample_iid(target, n, seed), out_path)
    return EXIT_PASS


def default_mh_config(m: int, n: int, seed: int, n_chains: int = 10, proposal_std: float = 1.0,
                      n_steps: Optional[int] = None, burn_in: Optional[int] = None) -> MHConfig:
    if n_steps is None:
        post = math.ceil(MH_OVERSAMPLE * m * n / n_chains)
        n_steps = math.ceil(post / 0.9) if burn_in is None else post + burn_in
    return MHConfig(n_steps=n_steps, n_chains=n_chains, proposal_std=proposal_std, burn_in=burn_in,
                    seed=child_seed(seed, 0, "builtin-mh"))


def cmd_run(cfg: RunConfig, out=None) -> int:
    """Benchmark user or built-in MH samples; writes ``report.json`` and ``overview.svg``."""
    out = out or sys.stdout
    target = get_target(cfg.testcase, load_config(cfg.config_path))
    if (cfg.input_path is None) == (cfg.mh is None):
        raise UsageError("give exactly one sample source: an input file or the built-in MH sampler")
    if cfg.input_path is not None:
        user = read_csv(cfg.input_path)
        label = f"file:{os.path.basename(cfg.input_path)}"
    else:
        mh = cfg.mh
        for attempt in range(cfg.mh_extend + 1):
            user = metropolis_hastings(target, mh)
            if cfg.collapse:
                user = collapse_repeats(user)
            if ess(user) >= cfg.m * cfg.n or attempt == cfg.mh_extend:
                break
            mh = replace(mh, n_steps=2 * mh.n_steps, burn_in=None if mh.burn_in is None else 2 * mh.burn_in)
        label = (f"builtin-mh(proposal_std={mh.proposal_std:g},chains={mh.n_chains},"
                 f"steps={mh.n_steps},burn_in={mh.n_burn_in},collapse={str(cfg.collapse).lower()})")

    ref, usr, summary = run_benchmark(target, cfg.metrics, cfg.m, cfg.n, user, cfg.seed, cfg.threads)
    doc = make_report(target.name, label, cfg.seed, cfg.m, cfg.n, ref, usr)
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_report(doc, os.path.join(cfg.out_dir, REPORT_NAME))
    plot_overview(summary, os.path.join(cfg.out_dir, OVERVIEW_NAME), title=f"{target.name}: {label}")

    width = max(len(r.metric) for r in summary)
    for r in summary:
        out.write(f"{r.metric.ljust(width)}  z={r.z:+8.3f}  std_ratio={r.std_ratio:7.3f}  {r.band}\n")
    return EXIT_PASS if summary.passed else EXIT_DEVIATION


def cmd_plot(report_path: str, metric: str, nbins: int, out_path: str) -> int:
    doc = read_report(report_path)
    names = [s.metric for s in doc.user]
    if metric not in names:
        raise UsageError(f"metric {metric!r} not in report; available: {', '.join(names) or '(none)'}")
    plot_teststatistic(doc.statistic(metric, "iid-reference"), doc.statistic(metric, "user"), nbins, out_path,
                       user_label=doc.sampler)
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="samplebench", description="Benchmark Monte Carlo samples against IID draws.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON config overriding test-case data (default: $SAMPLEBENCH_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list the built-in test cases")

    s = sub.add_parser("sample", help="write IID samples of a test case to CSV")
    s.add_argument("testcase")
    s.add_argument("-n", type=int, required=True, help="number of samples")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out", required=True, help="output CSV path")

    r = sub.add_parser("run", help="benchmark samples against the IID reference")
    r.add_argument("testcase")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV file with columns x_1..x_d[,weight][,logpdf]")
    src.add_argument("--mh", action="store_true", help="use the built-in Metropolis-Hastings sampler")
    r.add_argument("--metric", action="append", metavar="SPEC",
                   help="metric spec, repeatable, e.g. mean, variance, chi_square:bins=50, swd:p=1,L=50, "
                        "mmd:sigma=median, mmd_rff:sigma=median,D=1000 (default: mean, variance, swd, mmd)")
    r.add_argument("-m", type=int, default=DEFAULT_M, help="number of batches")
    r.add_argument("-n", type=int, default=DEFAULT_N, help="effective samples per batch")
    r.add_argument("--seed", type=int, default=0, help="master seed")
    r.add_argument("--out", default=".", help="output directory")
    r.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    r.add_argument("--mh-steps", type=int, default=None,
                   help=f"steps per chain (default: {MH_OVERSAMPLE}x m*n samples in total, doubled "
                        f"up to {MH_MAX_DOUBLINGS} times while the effective sample size is short)")
    r.add_argument("--mh-chains", type=int, default=10)
    r.add_argument("--mh-proposal-std", type=float, default=1.0)
    r.add_argument("--mh-burn-in", type=int, default=None, help="default: 10%% of steps")
    r.add_argument("--no-collapse", action="store_true",
                   help="keep repeated MH states as separate unit-weight rows")

    q = sub.add_parser("plot", help="histogram overlay of one metric from a saved report")
    q.add_argument("report")
    q.add_argument("metric")
    q.add_argument("--nbins", type=int, default=20)
    q.add_argument("-o", "--out", required=True, help="output SVG path")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return cmd_list(args.config)
        if args.command == "sample":
            return cmd_sample(args.testcase, args.n, args.seed, args.out, args.config)
        if args.command == "plot":
            return cmd_plot(args.report, args.metric, args.nbins, args.out)
        metrics = [MetricDescriptor.parse(s) for s in args.metric] if args.metric else default_metrics()
        mh = None
        if args.mh:
            mh = default_mh_config(args.m, args.n, args.seed, args.mh_chains, args.mh_proposal_std,
                                   args.mh_steps, args.mh_burn_in)
        cfg = RunConfig(args.testcase, metrics, args.m, args.n, args.seed, args.input, mh,
                        not args.no_collapse, args.out, args.threads, args.config,
                        mh_extend=MH_MAX_DOUBLINGS if args.mh and args.mh_steps is None else 0)
        return cmd_run(cfg)
    except (UsageError, NotFoundError, ParameterError) as exc:
        print(f"samplebench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"samplebench: insufficient samples: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except UnsupportedMetricError as exc:
        print(f"samplebench: unsupported metric: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (FormatError, ProgressError, OSError) as exc:
        print(f"samplebench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
