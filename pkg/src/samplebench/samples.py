"""Sample container, CSV ingestion, effective sample size and batching."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, FormatError, ParameterError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """A set of ``n`` points in ``d`` dimensions.

    ``weights`` is ``None`` for unweighted samples (every point counts once).
    A one-dimensional ``points`` array is read as ``n`` scalar samples.
    Equality compares the numeric content only; ``source`` is a label.
    """

    points: np.ndarray
    weights: Optional[np.ndarray] = None
    logdensities: Optional[np.ndarray] = None
    source: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ParameterError(f"points must be a non-empty n x d array, got shape {pts.shape}")
        object.__setattr__(self, "points", _frozen(pts))
        n = pts.shape[0]
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.shape[0] != n:
                raise ParameterError(f"expected {n} weights, got {w.shape[0]}")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ParameterError("weights must be finite and nonnegative")
            if not np.any(w > 0):
                raise ParameterError("weights are all zero")
            object.__setattr__(self, "weights", _frozen(w))
        if self.logdensities is not None:
            ld = np.asarray(self.logdensities, dtype=float).reshape(-1)
            if ld.shape[0] != n:
                raise ParameterError(f"expected {n} log-density values, got {ld.shape[0]}")
            object.__setattr__(self, "logdensities", _frozen(ld))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.n)
        return self.weights

    @property
    def has_unit_weights(self) -> bool:
        """True if every point counts exactly once (no weights, or all equal)."""
        w = self.weights
        return w is None or bool(np.all(w == w[0]))

    def take(self, rows) -> "SampleBatch":
        rows = np.asarray(rows)
        return SampleBatch(
            self.points[rows],
            None if self.weights is None else self.weights[rows],
            None if self.logdensities is None else self.logdensities[rows],
            self.source,
        )

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleBatch):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and bool(np.array_equal(a, b))

        return (
            same(self.points, other.points)
            and same(self.weights, other.weights)
            and same(self.logdensities, other.logdensities)
        )

    __hash__ = None


def ess(batch: SampleBatch) -> float:
    """Effective sample size ``(sum w)^2 / sum w^2``.

    Equals ``batch.n`` exactly for unweighted or equally weighted input.
    """
    if batch.has_unit_weights:
        return float(batch.n)
    w = batch.weights
    total = w.sum()
    if total <= 0:
        raise ParameterError("weights are all zero")
    # normalise first so huge weights cannot overflow the squares
    p = w / total
    return float(1.0 / np.dot(p, p))


def efficiency(batch: SampleBatch) -> float:
    """Global efficiency ``ess / n`` used to size partition chunks."""
    return ess(batch) / batch.n


def collapse_repeats(batch: SampleBatch) -> SampleBatch:
    """Merge runs of consecutive identical rows into one weighted row.

    This is the usual storage of Metropolis chains: a rejected proposal
    repeats the current state, so each distinct state carries the number
    of iterations the chain spent there as its weight.
    """
    pts = batch.points
    w = batch.weight_array
    if batch.n == 1:
        return batch
    new_run = np.ones(batch.n, dtype=bool)
    new_run[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    starts = np.flatnonzero(new_run)
    weights = np.add.reduceat(w, starts)
    ld = None if batch.logdensities is None else batch.logdensities[starts]
    return SampleBatch(pts[starts], weights, ld, batch.source)


# --- CSV -------------------------------------------------------------------

_COORD_PREFIX = "x_"


def _parse_cell(text: str, row: int, col: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise FormatError(f"row {row}: column {col!r}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise FormatError(f"row {row}: column {col!r}: non-finite value {text!r}")
    return v


def read_csv(path) -> SampleBatch:
    """Read samples from a CSV file with header ``x_1,...,x_d[,weight][,logpdf]``.

    Row numbers in error messages count the header as row 1.
    """
    path = os.fspath(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise FormatError(f"{path}: empty file, header row required") from None

        coords = {}
        extra = {}
        for j, name in enumerate(header):
            if name.startswith(_COORD_PREFIX) and name[len(_COORD_PREFIX):].isdigit():
                coords[int(name[len(_COORD_PREFIX):])] = j
            elif name in ("weight", "logpdf"):
                extra[name] = j
            else:
                raise FormatError(f"{path}: row 1: unknown column {name!r}")
        if len(set(header)) != len(header):
            raise FormatError(f"{path}: row 1: duplicate column names")
        d = len(coords)
        if d == 0 or sorted(coords) != list(range(1, d + 1)):
            raise FormatError(f"{path}: row 1: coordinate columns must be x_1..x_d, got {sorted(coords)}")
        order = [coords[i] for i in range(1, d + 1)]

        points, weights, logpdf = [], [], []
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise FormatError(f"{path}: row {row_no}: expected {len(header)} fields, got {len(row)}")
            points.append([_parse_cell(row[j], row_no, header[j]) for j in order])
            if "weight" in extra:
                w = _parse_cell(row[extra["weight"]], row_no, "weight")
                if w < 0:
                    raise FormatError(f"{path}: row {row_no}: negative weight {w}")
                weights.append(w)
            if "logpdf" in extra:
                logpdf.append(_parse_cell(row[extra["logpdf"]], row_no, "logpdf"))

    if not points:
        raise FormatError(f"{path}: no data rows")
    try:
        return SampleBatch(
            np.array(points),
            np.array(weights) if "weight" in extra else None,
            np.array(logpdf) if "logpdf" in extra else None,
            source=os.path.basename(path),
        )
    except ParameterError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_csv(batch: SampleBatch, path) -> None:
    header = [f"{_COORD_PREFIX}{i + 1}" for i in range(batch.dim)]
    cols = [batch.points]
    if batch.weights is not None:
        header.append("weight")
        cols.append(batch.weights[:, None])
    if batch.logdensities is not None:
        header.append("logpdf")
        cols.append(batch.logdensities[:, None])
    table = np.hstack(cols)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in table:
            fh.write(",".join("%.17g" % v for v in row) + "\n")


# --- batching ----------------------------------------------------------------

def chunk_length(batch: SampleBatch, n_eff: int) -> int:
    rho = efficiency(batch)
    # rounding guard: rho == 1 must give exactly n_eff
    return int(math.ceil(round(n_eff / rho, 9)))


def partition(batch: SampleBatch, m: int, n_eff: int) -> list[SampleBatch]:
    """Split ``batch`` into ``m`` contiguous chunks of effective size ``n_eff``.

    Chunks follow row order so each keeps the sampler's autocorrelation.
    Every chunk has ``ceil(n_eff / rho)`` rows, ``rho`` being the global
    efficiency; rows past ``m`` chunks are dropped.
    """
    if m < 1 or n_eff < 1:
        raise ParameterError("m and n_eff must be positive")
    available = ess(batch)
    required = m * n_eff
    length = chunk_length(batch, n_eff)
    if available + 1e-9 * required < required or m * length > batch.n:
        raise CapacityError(
            f"need effective sample size {required} ({m} batches x {n_eff}), "
            f"available {available:.6g} from {batch.n} rows"
        )
    return [batch.take(np.arange(k * length, (k + 1) * length)) for k in range(m)]


def weighted_resample(batch: SampleBatch, n: int, seed) -> SampleBatch:
    """Draw ``n`` unweighted points by systematic resampling.

    With equal weights and ``n == batch.n`` every row is selected exactly
    once, in input order.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random()
    w = batch.weight_array
    cdf = np.cumsum(w) / w.sum()
    cdf[-1] = 1.0
    positions = (u + np.arange(n)) / n
    idx = np.searchsorted(cdf, positions, side="right")
    idx = np.minimum(idx, batch.n - 1)
    pts = batch.points[idx]
    ld = None if batch.logdensities is None else batch.logdensities[idx]
    return SampleBatch(pts, None, ld, batch.source)
