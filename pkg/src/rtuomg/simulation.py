"""Monte Carlo study of estimator bias and MSE for RTUOMG fits.

Each ``(method, n)`` cell draws ``n_reps`` samples from the true law,
fits them, and reports componentwise absolute bias, signed bias and MSE
over the fits that converged. Replicate seeds are derived by hashing
``(root seed, method id, n, replicate index)`` so each cell is
reproducible on its own and independent of the other cells.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .distributions import RtuomgParams, rtuomg_sample
from .errors import DomainError
from .estimation import METHODS, FitOptions, fit

MASK64 = (1 << 64) - 1
STUDY_HEADER = ("method", "n", "bias_alpha", "bias_beta", "bias_p",
                "mse_alpha", "mse_beta", "mse_p", "failures")

# number of lattice starts kept after screening by initial objective value
SIMULATION_SCREEN = 5


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed with the SplitMix64 finalizer.

    ``h = splitmix64(h ^ part)`` for each part, starting from ``h = 0``.
    Parts are reduced modulo 2^64 first.
    """
    h = 0
    for part in parts:
        h = _splitmix64(h ^ (int(part) & MASK64))
    return h


def method_id(method: str) -> int:
    """Stable integer id of an estimation method (its index in ``METHODS``)."""
    return METHODS.index(method)


@dataclass(frozen=True)
class StudyConfig:
    """Setup of a simulation study."""

    true_params: RtuomgParams
    sample_sizes: tuple[int, ...] = (25, 50, 100, 150, 200, 250)
    n_reps: int = 500
    methods: tuple[str, ...] = METHODS
    seed: int = 20240101

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sample_sizes)
        methods = tuple(m.lower() for m in self.methods)
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "methods", methods)
        if not sizes:
            raise DomainError("sample_sizes must be nonempty")
        if any(n < 1 for n in sizes) or any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise DomainError("sample_sizes must be positive and strictly ascending")
        if int(self.n_reps) < 1:
            raise DomainError("n_reps must be at least 1")
        bad = [m for m in methods if m not in METHODS]
        if bad:
            raise DomainError(f"unknown methods {bad}; choose from {METHODS}")
        if len(set(methods)) != len(methods):
            raise DomainError("methods must not repeat")
        if not 0 <= int(self.seed) <= MASK64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class StudyCell:
    method: str
    n: int
    abs_bias: tuple[float, float, float]
    mse: tuple[float, float, float]
    failures: int
    bias: tuple[float, float, float] = (float("nan"),) * 3

    def row(self) -> list:
        return [self.method, self.n, *self.abs_bias, *self.mse, self.failures]


@dataclass
class StudyTable:
    """Cells ordered method-major, then by ascending ``n``."""

    cells: list[StudyCell] = field(default_factory=list)
    n_reps: int | None = None

    def cell(self, method: str, n: int) -> StudyCell:
        for c in self.cells:
            if c.method == method and c.n == n:
                return c
        raise KeyError((method, n))

    def methods(self) -> list[str]:
        return list(dict.fromkeys(c.method for c in self.cells))

    def sizes(self, method: str) -> list[int]:
        return [c.n for c in self.cells if c.method == method]


Fitter = Callable[[np.ndarray, str], "tuple[tuple[float, float, float], bool]"]


def default_fitter(x: np.ndarray, method: str):
    """Fit RTUOMG from the screened start lattice; return ``(values, converged)``."""
    res = fit(x, method, FitOptions(std_errors=False, screen=SIMULATION_SCREEN))
    return res.values, bool(res.converged)


def _replicate(args):
    fitter, truth, method, n, seed = args
    x = rtuomg_sample(n, truth, seed)
    try:
        est, ok = fitter(x, method)
    except (ValueError, ArithmeticError, RuntimeError):
        return None
    est = np.asarray(est, dtype=float)
    if not ok or est.shape != (3,) or not np.all(np.isfinite(est)):
        return None
    return est


def _aggregate(method, n, truth, estimates) -> StudyCell:
    ok = [e for e in estimates if e is not None]
    failures = len(estimates) - len(ok)
    if not ok:
        nan3 = (float("nan"),) * 3
        return StudyCell(method, n, nan3, nan3, failures, nan3)
    eta = np.asarray(truth, dtype=float)
    # sums run in replicate order, so the result is independent of scheduling
    err = np.vstack(ok) - eta
    m = len(ok)
    abs_bias = tuple(float(v) for v in np.abs(err).sum(axis=0) / m)
    mse = tuple(float(v) for v in (err * err).sum(axis=0) / m)
    bias = tuple(float(v) for v in err.sum(axis=0) / m)
    return StudyCell(method, n, abs_bias, mse, failures, bias)


def run_study(config: StudyConfig, workers: int = 1, fitter: Fitter | None = None) -> StudyTable:
    """Run every ``(method, n)`` cell of the study.

    Parameters
    ----------
    config : StudyConfig
    workers : int
        Processes used for replicates; ``1`` runs in-process. The output is
        identical for any value.
    fitter : callable, optional
        ``fitter(x, method) -> (values, converged)``; defaults to
        :func:`default_fitter`. Must be picklable when ``workers > 1``.

    Returns
    -------
    StudyTable
        Non-converged or failed fits are excluded from the averages and
        counted in ``failures``.
    """
    fitter = fitter or default_fitter
    truth = config.true_params
    eta = (truth.alpha, truth.beta, truth.p)
    jobs = []
    for method in config.methods:
        mid = method_id(method)
        for n in config.sample_sizes:
            for j in range(config.n_reps):
                jobs.append((fitter, truth, method, n, mix_seed(config.seed, mid, n, j)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_replicate, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        results = [_replicate(job) for job in jobs]

    table = StudyTable(n_reps=config.n_reps)
    k = 0
    for method in config.methods:
        for n in config.sample_sizes:
            chunk = results[k:k + config.n_reps]
            k += config.n_reps
            table.cells.append(_aggregate(method, n, eta, chunk))
    return table


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) or isinstance(v, str):
        return str(v)
    return "%.10g" % v


def emit_study_csv(table: StudyTable) -> str:
    """CSV text with header ``method,n,bias_alpha,...,mse_p,failures``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STUDY_HEADER)
    for c in table.cells:
        w.writerow([_fmt(v) for v in c.row()])
    return buf.getvalue()


def parse_study_csv(text: str) -> StudyTable:
    """Inverse of :func:`emit_study_csv` (signed biases are not carried)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != STUDY_HEADER:
        raise DomainError("not a study CSV: header mismatch")
    cells = []
    for r in rows[1:]:
        if not r:
            continue
        if len(r) != len(STUDY_HEADER):
            raise DomainError(f"bad study row {r!r}")
        vals = [float(v) for v in r[2:8]]
        cells.append(StudyCell(r[0], int(r[1]), tuple(vals[:3]), tuple(vals[3:]), int(r[8])))
    return StudyTable(cells)


def _triple(values) -> dict:
    # NaN (a cell with no converged fits) becomes null
    return {k: (None if v != v else v) for k, v in zip(("alpha", "beta", "p"), values)}


def emit_study_json(table: StudyTable) -> str:
    """JSON mirror of the CSV, with signed biases added per cell."""
    out = []
    for c in table.cells:
        out.append({
            "method": c.method,
            "n": c.n,
            "abs_bias": _triple(c.abs_bias),
            "bias": _triple(c.bias),
            "mse": _triple(c.mse),
            "failures": c.failures,
        })
    return json.dumps({"cells": out}, indent=2, sort_keys=True)


def format_table(table: StudyTable, methods: Sequence[str] | None = None) -> str:
    """Plain-text layout with one block per method."""
    lines = []
    for m in methods or table.methods():
        lines.append(m.upper())
        lines.append("%6s %12s %12s %12s %12s %12s %12s %4s" % ("n", "|b| alpha", "|b| beta", "|b| p",
                                                             "mse alpha", "mse beta", "mse p", "fail"))
        for c in table.cells:
            if c.method == m:
                lines.append("%6d %12.7f %12.7f %12.7f %12.7f %12.7f %12.7f %4d"
                             % (c.n, *c.abs_bias, *c.mse, c.failures))
    return "\n".join(lines)
