"""Error/runtime sweeps over schemes, ranks and trials, with bound verification.

A sweep draws one matrix, then runs every (scheme, rank, trial) cell on it.
Trial ``t`` uses the seed ``derive_seed(seed_base, t)`` for every scheme and
rank, so schemes are compared on paired test matrices. Only the scheme call
is timed.
"""

import csv
import json
import logging
import math
import statistics
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .approx import SCHEMES, ApproxConfig, relative_error, run_scheme
from .bounds import SpectrumTail, frobenius_bound
from .exceptions import InsufficientSampleError, ParameterError
from .linalg import fro_norm
from .mmio import read_matrix_market
from .sketch import derive_seed
from .testgen import generate, parse_generator

log = logging.getLogger(__name__)

CSV_HEADER = ("scheme", "r", "l", "trial", "seed", "rel_err_frob", "elapsed_seconds",
              "rank_used", "bound_frob", "bound_satisfied")

# Schemes that take an oversampling parameter.
OVERSAMPLED = ("gn", "gn-stabilized")


@dataclass
class SweepConfig:
    """One sweep. ``oversampling`` is ``"half"`` (``max(2, ceil(r/2))``) or an int.

    ``matrix_source`` is a generator name (sized by ``m``, seeded by
    ``matrix_seed``, default ``seed_base``) or a Matrix Market path; for a
    file, ``spectrum_path`` may name a sidecar with its exact singular values.
    """

    matrix_source: str
    schemes: list
    ranks: list
    trials: int = 20
    seed_base: int = 0
    m: int = 500
    oversampling: object = "half"
    sketch_kind: str = "gaussian"
    k_for_bounds: int | None = None
    power_q: int = 0
    matrix_seed: int | None = None
    spectrum_path: str | None = None
    density: float = 0.01
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.schemes = list(self.schemes)
        self.ranks = [int(r) for r in self.ranks]
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if not self.ranks or any(b <= a for a, b in zip(self.ranks, self.ranks[1:])):
            raise ParameterError(f"ranks must be nonempty and strictly increasing, got {self.ranks}")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown or not self.schemes:
            raise ParameterError(f"unknown schemes {unknown}; expected a subset of {SCHEMES}")
        if not (self.oversampling == "half" or (isinstance(self.oversampling, int)
                                                 and self.oversampling >= 2)):
            raise ParameterError(f"oversampling must be 'half' or an int >= 2, got {self.oversampling!r}")

    def oversampling_for(self, scheme, r):
        if scheme not in OVERSAMPLED:
            return 0
        if self.oversampling == "half":
            return max(2, math.ceil(0.5 * r))
        return self.oversampling

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        extra = set(d) - names
        if extra:
            raise ParameterError(f"unknown sweep config fields: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return asdict(self)


@dataclass
class ApproxReport:
    scheme: str
    r: int
    l: int
    trial: int
    seed: int
    rel_err_frob: float
    elapsed_seconds: float
    rank_used: int
    bound_frob: float | None = None
    bound_satisfied: bool | None = None
    error: str | None = field(default=None, compare=False)

    def sort_key(self):
        return (self.scheme, self.r, self.trial)


@dataclass
class BoundVerdict:
    scheme: str
    r: int
    l: int
    trials: int
    mean_abs_error: float
    bound: float | None
    status: str  # "pass", "fail" or "n/a"


def load_matrix(config):
    """Return ``(matrix, sigma or None)`` for the sweep's matrix source."""
    seed = config.seed_base if config.matrix_seed is None else config.matrix_seed
    try:
        parse_generator(config.matrix_source)
    except ParameterError:
        matrix = read_matrix_market(config.matrix_source)
        sigma = None
        if config.spectrum_path:
            sigma = read_spectrum(config.spectrum_path)
        return matrix, sigma
    return generate(config.matrix_source, config.m, seed, config.density)


def read_spectrum(path):
    return np.loadtxt(path, dtype=np.float64, ndmin=1)


def _run_cell(a, norm_a, config, tail, scheme, r, trial):
    seed = derive_seed(config.seed_base, trial)
    l = config.oversampling_for(scheme, r)
    cfg = ApproxConfig(rank=r, oversampling=l if l else None, power_q=config.power_q,
                       seed=seed, sketch_kind=config.sketch_kind)
    start = time.perf_counter()
    try:
        factors = run_scheme(scheme, a, cfg)
    except (ValueError, np.linalg.LinAlgError) as exc:
        elapsed = time.perf_counter() - start
        log.warning("%s at r=%d, trial %d failed: %s", scheme, r, trial, exc)
        return ApproxReport(scheme, r, l, trial, seed, math.nan, elapsed, 0, error=str(exc))
    elapsed = time.perf_counter() - start
    rel = relative_error(a, factors)
    bound = satisfied = None
    if tail is not None:
        bound = frobenius_bound(scheme, tail, r, l)
        if bound is not None:
            satisfied = bool(rel * norm_a <= bound)
    return ApproxReport(scheme, r, l, trial, seed, rel, elapsed, factors.rank_used,
                        bound, satisfied)


def run_sweep(config, matrix=None, sigma=None):
    """Run every (scheme, rank, trial) cell; reports come back in (scheme, r, trial) order.

    ``matrix``/``sigma`` override :func:`load_matrix`. Cells whose scheme
    rejects its parameters produce a report with ``error`` set and a NaN
    error instead of aborting the sweep.
    """
    if matrix is None:
        matrix, sigma = load_matrix(config)
    norm_a = fro_norm(matrix)
    tail = None
    if sigma is not None and config.k_for_bounds is not None:
        tail = SpectrumTail(np.asarray(sigma), config.k_for_bounds)
    cells = [(s, r, t) for s in config.schemes for r in config.ranks
             for t in range(config.trials)]

    def run(cell):
        return _run_cell(matrix, norm_a, config, tail, *cell)

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            reports = list(pool.map(run, cells))
    else:
        reports = [run(c) for c in cells]
    return sorted(reports, key=ApproxReport.sort_key)


def group_reports(reports):
    groups = defaultdict(list)
    for rep in reports:
        if rep.error is None and not math.isnan(rep.rel_err_frob):
            groups[(rep.scheme, rep.r)].append(rep)
    return dict(sorted(groups.items()))


def mean_errors(reports):
    """``{(scheme, r): mean relative error}`` over successful trials."""
    return {key: statistics.fmean(rep.rel_err_frob for rep in reps)
            for key, reps in group_reports(reports).items()}


def verify_bounds(reports, true_sigma, k, norm_a=None, min_trials=20, slack=1.05, atol=None):
    """Compare trial-mean absolute errors with the matching theorem bounds.

    A group passes iff ``mean(rel_err) * ||A||_F <= slack * bound + atol``;
    ``atol`` defaults to ``1e-10 * ||A||_F`` so exact-rank inputs (bound 0)
    pass at roundoff level. Schemes without a bound are marked ``"n/a"``.
    ``norm_a`` defaults to the Frobenius norm implied by ``true_sigma``.
    """
    sigma = np.asarray(true_sigma, dtype=np.float64)
    tail = SpectrumTail(sigma, k)
    if norm_a is None:
        norm_a = float(np.sqrt(np.sum(sigma ** 2)))
    if atol is None:
        atol = 1e-10 * norm_a
    verdicts = []
    for (scheme, r), reps in group_reports(reports).items():
        l = reps[0].l
        mean_abs = statistics.fmean(rep.rel_err_frob for rep in reps) * norm_a
        bound = frobenius_bound(scheme, tail, r, l)
        if bound is None:
            verdicts.append(BoundVerdict(scheme, r, l, len(reps), mean_abs, None, "n/a"))
            continue
        if len(reps) < min_trials:
            raise InsufficientSampleError(
                f"{scheme} at r={r} has {len(reps)} trials; bound checks need >= {min_trials}")
        status = "pass" if mean_abs <= slack * bound + atol else "fail"
        verdicts.append(BoundVerdict(scheme, r, l, len(reps), mean_abs, bound, status))
    return verdicts


def format_verdicts(verdicts):
    lines = [f"{'scheme':<14}{'r':>5}{'l':>5}{'trials':>8}{'mean_abs_err':>16}{'bound':>16}  verdict"]
    for v in verdicts:
        bound = "-" if v.bound is None else f"{v.bound:.6e}"
        lines.append(f"{v.scheme:<14}{v.r:>5}{v.l:>5}{v.trials:>8}"
                     f"{v.mean_abs_error:>16.6e}{bound:>16}  {v.status}")
    return "\n".join(lines)


def _fmt_float(x):
    return "" if x is None else f"{x:.17g}"


def emit_csv(reports, path):
    """One row per report, (scheme, r, trial) order, floats at 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rep in sorted(reports, key=ApproxReport.sort_key):
            writer.writerow([
                rep.scheme, rep.r, rep.l, rep.trial, rep.seed,
                _fmt_float(rep.rel_err_frob), _fmt_float(rep.elapsed_seconds), rep.rank_used,
                _fmt_float(rep.bound_frob),
                "" if rep.bound_satisfied is None else str(rep.bound_satisfied).lower(),
            ])


def read_csv(path):
    """Parse a CSV written by :func:`emit_csv` back into reports."""
    reports = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"row has {len(row)} fields, expected {len(CSV_HEADER)}: {row}")
            d = dict(zip(CSV_HEADER, row))
            reports.append(ApproxReport(
                d["scheme"], int(d["r"]), int(d["l"]), int(d["trial"]), int(d["seed"]),
                float(d["rel_err_frob"]), float(d["elapsed_seconds"]), int(d["rank_used"]),
                float(d["bound_frob"]) if d["bound_frob"] else None,
                {"true": True, "false": False, "": None}[d["bound_satisfied"]],
            ))
    return reports


def timing_warnings(reports, fast="gn", slow="rsvd"):
    """Messages for ranks where ``fast`` has a larger median time than ``slow``."""
    times = defaultdict(list)
    for rep in reports:
        if rep.error is None:
            times[(rep.scheme, rep.r)].append(rep.elapsed_seconds)
    out = []
    for (scheme, r), ts in sorted(times.items()):
        if scheme != fast or (slow, r) not in times:
            continue
        t_fast, t_slow = statistics.median(ts), statistics.median(times[(slow, r)])
        if t_fast > t_slow:
            out.append(f"r={r}: median {fast} time {t_fast:.3g}s exceeds {slow} {t_slow:.3g}s")
    return out
