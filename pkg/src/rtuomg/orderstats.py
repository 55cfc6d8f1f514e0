"""Order statistics, record values and a likelihood-ratio order check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import (RtuomgParams, log_omega, rtuomg_cdf,
                            rtuomg_log_pdf, rtuomg_log_sf, rtuomg_pdf)
from .errors import DomainError
from .specfun import beta_fn

__all__ = [
    "OrderSpec", "LrCheck", "order_stat_pdf", "order_stat_pdf_alternating",
    "order_stat_cdf", "order_stat_cdf_alternating", "extreme_pdfs",
    "record_pdf", "joint_records_log_pdf", "lr_ordering_check",
]


@dataclass(frozen=True)
class OrderSpec:
    """Rank ``r`` out of a sample of size ``n``."""

    n: int
    r: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.r <= self.n:
            raise DomainError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")


class LrCheck(NamedTuple):
    holds: bool
    max_violation: float


def _ret(v, like):
    return float(v) if np.ndim(like) == 0 else v


def _survival_omega_form(x, params):
    """``1 - F = w - p w log w``."""
    l = log_omega(x, params.alpha, params.beta)
    w = np.exp(l)
    return w - params.p * w * l


def order_stat_pdf(x, spec: OrderSpec, params: RtuomgParams):
    """Density of the r-th order statistic, ``F^(r-1) (1-F)^(n-r) f / B(r, n-r+1)``."""
    n, r = spec.n, spec.r
    logf = np.asarray(rtuomg_log_pdf(x, params))
    F = np.asarray(rtuomg_cdf(x, params))
    logS = np.asarray(rtuomg_log_sf(x, params))
    with np.errstate(divide="ignore"):
        logF = np.log(F)
    lognorm = math.lgamma(n + 1) - math.lgamma(r) - math.lgamma(n - r + 1)
    out = np.exp(lognorm + (r - 1) * logF + (n - r) * logS + logf) if r > 1 else \
        np.exp(lognorm + (n - r) * logS + logf)
    return _ret(out, x)


def order_stat_pdf_alternating(x, spec: OrderSpec, params: RtuomgParams):
    """Same density via ``f / B(r, n-r+1) * sum_i C(r-1, i) (-1)^i (1-F)^(n+i-r)``.

    Cancellation makes this unreliable for large n; used as a cross-check.
    """
    n, r = spec.n, spec.r
    f = np.asarray(rtuomg_pdf(x, params))
    S = 1.0 - np.asarray(rtuomg_cdf(x, params))
    acc = sum(math.comb(r - 1, i) * (-1) ** i * S ** (n + i - r) for i in range(r))
    return _ret(f * acc / beta_fn(r, n - r + 1), x)


def order_stat_cdf(x, spec: OrderSpec, params: RtuomgParams):
    """``sum_{j=r}^n C(n, j) F^j (1-F)^(n-j)``."""
    n, r = spec.n, spec.r
    F = np.asarray(rtuomg_cdf(x, params), dtype=float)
    S = 1.0 - F
    acc = sum(math.comb(n, j) * F**j * S ** (n - j) for j in range(r, n + 1))
    return _ret(np.clip(acc, 0.0, 1.0), x)


def order_stat_cdf_alternating(x, spec: OrderSpec, params: RtuomgParams):
    """``sum_j sum_l C(n, j) C(n-j, l) (-1)^l F^(j+l)``; cross-check form."""
    n, r = spec.n, spec.r
    F = np.asarray(rtuomg_cdf(x, params), dtype=float)
    acc = 0.0
    for j in range(r, n + 1):
        for l in range(n - j + 1):
            acc = acc + math.comb(n, j) * math.comb(n - j, l) * (-1) ** l * F ** (j + l)
    return _ret(acc, x)


def extreme_pdfs(x, n: int, params: RtuomgParams):
    """Densities of the sample minimum and maximum.

    The minimum uses ``n f (1-F)^(n-1)`` with ``1 - F = w - p w log w``;
    the maximum uses ``n f sum_i C(n-1, i) (-1)^i (1-F)^i``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    f = np.asarray(rtuomg_pdf(x, params))
    S = _survival_omega_form(x, params)
    fmin = n * f * S ** (n - 1)
    fmax = n * f * sum(math.comb(n - 1, i) * (-1) ** i * S**i for i in range(n))
    return _ret(fmin, x), _ret(fmax, x)


def record_pdf(x, n: int, which: str, params: RtuomgParams):
    """Density of the n-th upper or lower record value."""
    if n < 1:
        raise DomainError("record index must be positive")
    logf = np.asarray(rtuomg_log_pdf(x, params))
    if which == "upper":
        # -log(1-F) = -(l + log(1 - p l))
        t = -np.asarray(rtuomg_log_sf(x, params))
    elif which == "lower":
        t = -np.log(np.asarray(rtuomg_cdf(x, params)))
    else:
        raise DomainError("which must be 'upper' or 'lower'")
    if n == 1:
        return _ret(np.exp(logf), x)
    with np.errstate(divide="ignore"):
        out = np.exp((n - 1) * np.log(t) - math.lgamma(n) + logf)
    return _ret(out, x)


def joint_records_log_pdf(r_vec, params: RtuomgParams) -> float:
    """Log joint density of the first n upper records ``r_1 < ... < r_n``."""
    r = np.asarray(r_vec, dtype=float).ravel()
    if r.size == 0:
        raise DomainError("need at least one record")
    if np.any(np.diff(r) <= 0):
        raise DomainError("records must be strictly increasing")
    total = float(rtuomg_log_pdf(r[-1], params))
    if r.size > 1:
        head = r[:-1]
        total += float(np.sum(np.asarray(rtuomg_log_pdf(head, params))
                              - np.asarray(rtuomg_log_sf(head, params))))
    return total


def lr_ordering_check(params1: RtuomgParams, params2: RtuomgParams,
                      grid_size: int = 1000, tol: float = 1e-12) -> LrCheck:
    """Check that ``f1 / f2`` is nonincreasing on a uniform interior grid.

    Returns whether every first difference of ``log f1 - log f2`` is at
    most ``tol`` and the largest positive difference found (0 if none).
    Both laws must share ``beta`` and ``p``.
    """
    if params1.beta != params2.beta or params1.p != params2.p:
        raise DomainError("lr ordering check needs equal beta and p")
    if grid_size < 10:
        raise DomainError("grid_size must be at least 10")
    x = np.arange(1, grid_size + 1) / (grid_size + 1.0)
    d = np.asarray(rtuomg_log_pdf(x, params1)) - np.asarray(rtuomg_log_pdf(x, params2))
    steps = np.diff(d)
    worst = float(max(0.0, steps.max()))
    return LrCheck(bool(np.all(steps <= tol)), worst)
