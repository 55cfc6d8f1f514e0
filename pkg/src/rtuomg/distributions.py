"""RTUOMG distribution, the record-based transmutation and competitor models.

The record-based transmuted unit omega (RTUOMG) law mixes the first two
upper-record distributions of the unit omega baseline

    H(x) = 1 - w(x),   w(x) = ((1 + x^b) / (1 - x^b))^(-a),

giving ``F = 1 - w + p w log w``. Everything is evaluated through
``l = log w`` so that both tails keep their relative accuracy.

Vectorized functions accept scalars or arrays and return the same shape.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import astuple, dataclass, fields
from typing import ClassVar

import numpy as np
from scipy import optimize

from .errors import DomainError
from .specfun import lambert_w_minus1_from_log

__all__ = [
    "RtuomgParams", "UomgParams", "CugParams", "CulParams", "UwParams",
    "DistributionModel", "RecordTransmuted", "Rtuomg", "Uomg", "Cug", "Cul",
    "Uw", "MODELS", "competitor_models", "make_model",
    "omega_fn", "log_omega", "rtuomg_cdf", "rtuomg_sf", "rtuomg_log_sf",
    "rtuomg_pdf", "rtuomg_log_pdf", "rtuomg_hazard", "rtuomg_quantile", "rtuomg_isf",
    "rtuomg_sample", "uniform_draws", "rt_transform",
]

_LOG2 = math.log(2.0)
# quantile outputs are kept inside the open support
_X_MIN = np.finfo(float).tiny
_X_MAX = 1.0 - 2.0**-53


# ---------------------------------------------------------------------------
# parameter carriers


def _check_positive(name, v):
    if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be a finite positive number, got {v!r}")


def _check_unit(name, v, closed):
    ok = math.isfinite(v) and (0.0 <= v <= 1.0 if closed else 0.0 < v < 1.0)
    if not ok:
        span = "[0, 1]" if closed else "(0, 1)"
        raise DomainError(f"{name} must lie in {span}, got {v!r}")


@dataclass(frozen=True)
class RtuomgParams:
    """Shape parameters ``alpha``, ``beta`` and record weight ``p``."""

    alpha: float
    beta: float
    p: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)
        _check_unit("p", self.p, closed=True)


@dataclass(frozen=True)
class UomgParams:
    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)


@dataclass(frozen=True)
class CugParams:
    """Median-based unit Gompertz; ``mu`` is the median."""

    mu: float
    beta: float

    def __post_init__(self):
        _check_unit("mu", self.mu, closed=False)
        _check_positive("beta", self.beta)


@dataclass(frozen=True)
class CulParams:
    """Median-based unit Lomax; ``mu`` is the median."""

    mu: float
    beta: float

    def __post_init__(self):
        _check_unit("mu", self.mu, closed=False)
        _check_positive("beta", self.beta)


@dataclass(frozen=True)
class UwParams:
    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)


# ---------------------------------------------------------------------------
# helpers


def _interior(x):
    """Validate points strictly inside (0, 1) for densities."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)) or np.any(~(x < 1.0)):
        raise DomainError("density evaluated outside the open interval (0, 1)")
    return x


def _ret(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _clip_support(x):
    return np.clip(x, _X_MIN, _X_MAX)


def _log_tanh(z):
    """log(tanh z) for z > 0, accurate at both ends."""
    # tanh z = (1 - e^{-2z}) / (1 + e^{-2z})
    t = -2.0 * np.asarray(z, dtype=float)
    return _log_one_minus_pow(t, 1.0) - np.log1p(np.exp(t))


def _log_one_minus_pow(log_x, k):
    """log(1 - x^k) given log x, accurate at both ends of (0, 1)."""
    t = k * log_x
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t < -0.7, np.log1p(-np.exp(t)), np.log(-np.expm1(t)))


def log_omega(x, alpha, beta):
    """``log w(x) = -alpha * [log1p(x^beta) - log(1 - x^beta)]`` on (0, 1)."""
    x = _interior(x)
    lx = np.log(x)
    y = np.exp(beta * lx)
    return -alpha * (np.log1p(y) - _log_one_minus_pow(lx, beta))


def omega_fn(x, alpha, beta):
    """Unit omega survival kernel ``((1 + x^beta)/(1 - x^beta))^(-alpha)``."""
    return _ret(np.exp(log_omega(x, alpha, beta)), x)


# ---------------------------------------------------------------------------
# record transmutation written in terms of l = log of the baseline sf


def _rt_cdf_from_log_sf(l, p):
    """``1 - e^l + p l e^l`` without cancellation for small |l|."""
    l = np.asarray(l, dtype=float)
    out = -np.expm1(l) + p * l * np.exp(l)
    small = np.abs(l) < 0.05
    if np.any(small):
        ls = l[small] if l.ndim else l
        # sum_k l^k (1 - p k) / k!
        acc = np.zeros_like(ls)
        pw = np.ones_like(ls)
        for k in range(1, 13):
            pw = pw * ls / k
            acc = acc + pw * (1.0 - p * k)
        if l.ndim:
            out[small] = -acc
        else:
            out = -acc
    return np.clip(out, 0.0, 1.0)


def _rt_log_sf_from_log_sf(l, p):
    return l + np.log1p(-p * l)


def _rt_log_factor(l, p):
    """``log(1 - p - p l)``, the density multiplier of the transmutation."""
    return np.log1p(-p * (1.0 + l)) if p < 0.5 else np.log((1.0 - p) - p * l)


# ---------------------------------------------------------------------------
# RTUOMG functions


def _unpack(params):
    return params.alpha, params.beta, params.p


def rtuomg_cdf(x, params: RtuomgParams):
    """Distribution function; 0 below the support and 1 above it."""
    a, b, p = _unpack(params)
    xa = np.asarray(x, dtype=float)
    inside = (xa > 0) & (xa < 1)
    out = np.where(xa >= 1.0, 1.0, 0.0)
    if np.any(inside):
        l = log_omega(xa[inside] if xa.ndim else xa, a, b)
        vals = _rt_cdf_from_log_sf(l, p)
        if xa.ndim:
            out[inside] = vals
        else:
            out = vals
    return _ret(out, x)


def rtuomg_log_sf(x, params: RtuomgParams):
    a, b, p = _unpack(params)
    l = log_omega(x, a, b)
    return _ret(_rt_log_sf_from_log_sf(l, p), x)


def rtuomg_sf(x, params: RtuomgParams):
    xa = np.asarray(x, dtype=float)
    if np.any((xa <= 0) | (xa >= 1)):
        return _ret(1.0 - np.asarray(rtuomg_cdf(xa, params)), x)
    return _ret(np.exp(rtuomg_log_sf(xa, params)), x)


def rtuomg_log_pdf(x, params: RtuomgParams):
    """Log density, stable near both ends of the support."""
    a, b, p = _unpack(params)
    x = _interior(x)
    lx = np.log(x)
    y = np.exp(b * lx)
    l = -a * (np.log1p(y) - _log_one_minus_pow(lx, b))
    with np.errstate(divide="ignore"):
        out = (math.log(2.0 * a * b) + (b - 1.0) * lx
               - _log_one_minus_pow(lx, 2.0 * b) + l + _rt_log_factor(l, p))
    return out if np.ndim(out) else float(out)


def rtuomg_pdf(x, params: RtuomgParams):
    return _ret(np.exp(rtuomg_log_pdf(x, params)), x)


def rtuomg_hazard(x, params: RtuomgParams):
    """Hazard ``f / (1 - F)``.

    In closed form this is
    ``2 a b x^(b-1) / (1 - x^(2b)) * (1 - p - p log w) / (1 - p log w)``.
    """
    with np.errstate(over="ignore"):
        out = np.exp(np.asarray(rtuomg_log_pdf(x, params)) - rtuomg_log_sf(x, params))
    return _ret(out, x)


def _log_sf_equation(s, p):
    """``s + log1p(-p s)``, with a series where the two terms cancel."""
    s = np.asarray(s, dtype=float)
    ps = p * s
    direct = s + np.log1p(-ps)
    acc = (1.0 - p) * s
    pw = ps
    for k in range(2, 24):
        pw = pw * ps
        acc = acc - pw / k
    return np.where(np.abs(ps) < 0.1, acc, direct)


def _solve_log_sf(s, log1m_u, p):
    """Newton polish of ``s + log1p(-p s) = log(1 - u)`` for s <= 0."""
    for _ in range(4):
        g = _log_sf_equation(s, p) - log1m_u
        dg = (1.0 - p - p * s) / (1.0 - p * s)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dg > 0.0, g / dg, 0.0)
        s = np.minimum(s - step, 0.0)
    return s


def rtuomg_quantile(u, params: RtuomgParams):
    """Quantile function via the lower Lambert branch.

    With ``s = log w(x)`` the equation ``F(x) = u`` becomes
    ``s + log(1 - p s) = log(1 - u)``, solved by
    ``s = W_{-1}(-(1-u) e^{-1/p} / p) + 1/p``. The Lambert argument is
    passed in log form. Where ``W + 1/p`` cancels (small u) the start is
    taken from the quadratic expansion instead, and every root gets a
    few Newton steps. Below ``p = 1e-10`` the unit omega inverse is the start.
    """
    ua = np.asarray(u, dtype=float)
    if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
        raise DomainError("quantile needs 0 < u < 1")
    return _ret(_quantile_from_log_sf(np.log1p(-ua), params), u)


def rtuomg_isf(v, params: RtuomgParams):
    """Inverse survival function, ``Q(1 - v)`` without forming ``1 - v``."""
    va = np.asarray(v, dtype=float)
    if np.any(~(va > 0.0)) or np.any(~(va < 1.0)):
        raise DomainError("inverse survival needs 0 < v < 1")
    return _ret(_quantile_from_log_sf(np.log(va), params), v)


def _quantile_from_log_sf(log1m_u, params):
    a, b, p = _unpack(params)
    if p < 1e-10:
        s = log1m_u
        if p > 0.0:
            s = _solve_log_sf(s, log1m_u, p)
    else:
        w = lambert_w_minus1_from_log(log1m_u - math.log(p) - 1.0 / p)
        s = np.minimum(np.asarray(w) + 1.0 / p, 0.0)
        # p^2 s^2 / 2 - (1-p) s - u ~ 0 for small s
        v = -log1m_u
        s_small = -2.0 * v / ((1.0 - p) + np.sqrt((1.0 - p) ** 2 + 2.0 * p * p * v))
        s = np.where(np.abs(s_small) < 1e-3, s_small, s)
        s = _solve_log_sf(s, log1m_u, p)
    # x^b = tanh(-s / (2a))
    x = np.exp(_log_tanh(-s / (2.0 * a)) / b)
    return _clip_support(x)


def uniform_draws(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniforms on the open interval, ``(k + 1/2) / 2^53`` with k uniform on 53 bits."""
    k = rng.integers(0, 2**53, size=n, dtype=np.int64)
    return (k.astype(float) + 0.5) / 2.0**53


def rtuomg_sample(n: int, params: RtuomgParams, seed: int) -> np.ndarray:
    """Inverse-transform sample of size ``n``.

    Uniforms come from numpy's PCG64 bit generator seeded with ``seed``
    (a non-negative integer below 2^64).
    """
    if n < 0:
        raise DomainError("sample size must be non-negative")
    if n == 0:
        return np.empty(0)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    return np.asarray(rtuomg_quantile(uniform_draws(rng, n), params), dtype=float).reshape(n)


# ---------------------------------------------------------------------------
# model objects


class DistributionModel(ABC):
    """Continuous law on (0, 1) with a parameter dataclass.

    Subclasses set ``name`` and ``params_type`` and implement ``log_pdf``
    plus ``log_sf`` (or ``cdf``). Transforms for unconstrained fitting
    are listed per parameter in ``transforms`` ("log" or "logit").
    """

    name: ClassVar[str]
    params_type: ClassVar[type]
    transforms: ClassVar[tuple[str, ...]]
    support = (0.0, 1.0)

    def __init__(self, *args, **kwargs):
        if len(args) == 1 and not kwargs and isinstance(args[0], self.params_type):
            self.params = args[0]
        else:
            self.params = self.params_type(*args, **kwargs)

    @classmethod
    def param_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls.params_type))

    @property
    def param_count(self) -> int:
        return len(fields(self.params_type))

    def values(self) -> tuple[float, ...]:
        return astuple(self.params)

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in zip(self.param_names(), self.values()))
        return f"{type(self).__name__}({inner})"

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self), self.params))

    @abstractmethod
    def log_pdf(self, x):
        ...

    def pdf(self, x):
        return _ret(np.exp(self.log_pdf(x)), x)

    def cdf(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.where(xa >= 1.0, 1.0, 0.0)
        inside = (xa > 0) & (xa < 1)
        if np.any(inside):
            v = -np.expm1(self.log_sf(xa[inside] if xa.ndim else xa))
            if xa.ndim:
                out[inside] = v
            else:
                out = v
        return _ret(out, x)

    def log_sf(self, x):
        return _ret(np.log1p(-np.asarray(self.cdf(_interior(x)))), x)

    def sf(self, x):
        return _ret(1.0 - np.asarray(self.cdf(x)), x)

    def hazard(self, x):
        with np.errstate(over="ignore"):
            return _ret(np.exp(np.asarray(self.log_pdf(x)) - self.log_sf(x)), x)

    def quantile(self, u):
        """Generic inverse by bracketed root finding on the cdf."""
        ua = np.asarray(u, dtype=float)
        if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
            raise DomainError("quantile needs 0 < u < 1")
        out = np.array([_bracket_inverse(self.cdf, ui) for ui in ua.ravel()])
        return _ret(out.reshape(ua.shape), u)

    def sample(self, n: int, seed: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        return np.asarray(self.quantile(uniform_draws(rng, n)), dtype=float).reshape(n)


def _bracket_inverse(cdf, u):
    # the cdf is defined as 0 and 1 at the endpoints, so [0, 1] always brackets
    f = lambda t: float(cdf(t)) - u
    return optimize.brentq(f, 0.0, 1.0, xtol=1e-300, rtol=1e-15, maxiter=2000)


class Uomg(DistributionModel):
    """Unit omega: ``H(x) = 1 - ((1 + x^b)/(1 - x^b))^(-a)``."""

    name = "UOMG"
    params_type = UomgParams
    transforms = ("log", "log")

    def log_sf(self, x):
        return _ret(log_omega(x, self.params.alpha, self.params.beta), x)

    def log_pdf(self, x):
        a, b = self.params.alpha, self.params.beta
        return rtuomg_log_pdf(x, RtuomgParams(a, b, 0.0))

    def quantile(self, u):
        ua = np.asarray(u, dtype=float)
        if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
            raise DomainError("quantile needs 0 < u < 1")
        a, b = self.params.alpha, self.params.beta
        # (1-u)^(-1/a) = t;  x^b = (t - 1)/(t + 1) = tanh(log t / 2)
        x = np.exp(_log_tanh(-np.log1p(-ua) / (2.0 * a)) / b)
        return _ret(_clip_support(x), u)


class RecordTransmuted(DistributionModel):
    """Record-based transmutation ``F = H + p Hbar log Hbar`` of a baseline."""

    params_type = None  # set per instance

    def __init__(self, baseline: DistributionModel, p: float):
        _check_unit("p", p, closed=True)
        self.baseline = baseline
        self.p = float(p)
        self.params = (baseline.params, self.p)

    @property
    def name(self):
        return "RT-" + self.baseline.name

    @property
    def param_count(self) -> int:
        return self.baseline.param_count + 1

    def values(self):
        return self.baseline.values() + (self.p,)

    def __repr__(self):
        return f"RecordTransmuted({self.baseline!r}, p={self.p!r})"

    def cdf(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.where(xa >= 1.0, 1.0, 0.0)
        inside = (xa > 0) & (xa < 1)
        if np.any(inside):
            l = self.baseline.log_sf(xa[inside] if xa.ndim else xa)
            v = _rt_cdf_from_log_sf(l, self.p)
            if xa.ndim:
                out[inside] = v
            else:
                out = v
        return _ret(out, x)

    def log_sf(self, x):
        return _ret(_rt_log_sf_from_log_sf(np.asarray(self.baseline.log_sf(x)), self.p), x)

    def log_pdf(self, x):
        l = np.asarray(self.baseline.log_sf(x))
        with np.errstate(divide="ignore"):
            out = np.asarray(self.baseline.log_pdf(x)) + _rt_log_factor(l, self.p)
        return _ret(out, x)


def rt_transform(baseline: DistributionModel, p: float) -> DistributionModel:
    """Record-based transmutation of ``baseline`` with weight ``p``."""
    return RecordTransmuted(baseline, p)


class Rtuomg(RecordTransmuted):
    """RTUOMG model with the Lambert-W quantile."""

    params_type = RtuomgParams
    transforms = ("log", "log", "logit")

    def __init__(self, *args, **kwargs):
        if len(args) == 1 and not kwargs and isinstance(args[0], RtuomgParams):
            prm = args[0]
        else:
            prm = RtuomgParams(*args, **kwargs)
        super().__init__(Uomg(prm.alpha, prm.beta), prm.p)
        self.params = prm

    name = "RTUOMG"

    def __repr__(self):
        a, b, p = _unpack(self.params)
        return f"Rtuomg(alpha={a!r}, beta={b!r}, p={p!r})"

    def values(self):
        return astuple(self.params)

    def cdf(self, x):
        return rtuomg_cdf(x, self.params)

    def log_pdf(self, x):
        return rtuomg_log_pdf(x, self.params)

    def log_sf(self, x):
        return rtuomg_log_sf(x, self.params)

    def quantile(self, u):
        return rtuomg_quantile(u, self.params)

    def sample(self, n, seed):
        return rtuomg_sample(n, self.params, seed)


class Cug(DistributionModel):
    """Median-based unit Gompertz.

    ``F(x) = 1 - 2^{[(1-x)^-b - 1] / [1 - (1-mu)^-b]}``, so ``F(mu) = 1/2``.
    """

    name = "CUG"
    params_type = CugParams
    transforms = ("logit", "log")

    def _c(self):
        mu, b = self.params.mu, self.params.beta
        return math.expm1(-b * math.log1p(-mu))  # (1-mu)^-b - 1 > 0

    def log_sf(self, x):
        x = _interior(x)
        b = self.params.beta
        g = np.expm1(-b * np.log1p(-x))
        return _ret(-_LOG2 * g / self._c(), x)

    def log_pdf(self, x):
        x = _interior(x)
        b = self.params.beta
        c = self._c()
        g = np.expm1(-b * np.log1p(-x))
        return _ret(math.log(b * _LOG2 / c) - (b + 1.0) * np.log1p(-x) - _LOG2 * g / c, x)

    def quantile(self, u):
        ua = np.asarray(u, dtype=float)
        if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
            raise DomainError("quantile needs 0 < u < 1")
        b = self.params.beta
        g = -np.log1p(-ua) / _LOG2 * self._c()  # (1-x)^-b - 1
        x = -np.expm1(-np.log1p(g) / b)
        return _ret(_clip_support(x), u)


class Cul(DistributionModel):
    """Median-based unit Lomax.

    ``F(x) = 1 - [1 - log(1-x)/b]^k`` with ``k = -log 2 / log(1 - log(1-mu)/b)``.
    """

    name = "CUL"
    params_type = CulParams
    transforms = ("logit", "log")

    def _g(self, x):
        return np.log1p(-np.log1p(-x) / self.params.beta)

    def _k(self):
        return -_LOG2 / float(self._g(self.params.mu))

    def log_sf(self, x):
        x = _interior(x)
        return _ret(self._k() * self._g(x), x)

    def log_pdf(self, x):
        x = _interior(x)
        b = self.params.beta
        k = self._k()
        return _ret(math.log(-k / b) - np.log1p(-x) + (k - 1.0) * self._g(x), x)

    def quantile(self, u):
        ua = np.asarray(u, dtype=float)
        if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
            raise DomainError("quantile needs 0 < u < 1")
        g = np.log1p(-ua) / self._k()
        x = -np.expm1(-self.params.beta * np.expm1(g))
        return _ret(_clip_support(x), u)


class Uw(DistributionModel):
    """Unit Weibull with ``F(x) = exp(-a (-log x)^b)``."""

    name = "UW"
    params_type = UwParams
    transforms = ("log", "log")

    def cdf(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.where(xa >= 1.0, 1.0, 0.0)
        inside = (xa > 0) & (xa < 1)
        if np.any(inside):
            t = -np.log(xa[inside] if xa.ndim else xa)
            v = np.exp(-self.params.alpha * t**self.params.beta)
            if xa.ndim:
                out[inside] = v
            else:
                out = v
        return _ret(out, x)

    def log_sf(self, x):
        x = _interior(x)
        t = -np.log(x)
        return _ret(np.log(-np.expm1(-self.params.alpha * t**self.params.beta)), x)

    def log_pdf(self, x):
        x = _interior(x)
        a, b = self.params.alpha, self.params.beta
        t = -np.log(x)
        return _ret(math.log(a * b) + t + (b - 1.0) * np.log(t) - a * t**b, x)

    def quantile(self, u):
        ua = np.asarray(u, dtype=float)
        if np.any(~(ua > 0.0)) or np.any(~(ua < 1.0)):
            raise DomainError("quantile needs 0 < u < 1")
        a, b = self.params.alpha, self.params.beta
        x = np.exp(-(-np.log(ua) / a) ** (1.0 / b))
        return _ret(_clip_support(x), u)


MODELS: dict[str, type[DistributionModel]] = {
    "rtuomg": Rtuomg,
    "uomg": Uomg,
    "cug": Cug,
    "cul": Cul,
    "uw": Uw,
}


def competitor_models() -> dict[str, type[DistributionModel]]:
    """The four competitor families keyed by lower-case name."""
    return {k: v for k, v in MODELS.items() if k != "rtuomg"}


def make_model(name: str, values) -> DistributionModel:
    """Build a model from its registry name and a parameter sequence."""
    try:
        cls = MODELS[name.lower()]
    except KeyError:
        raise DomainError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    values = tuple(float(v) for v in values)
    expected = len(cls.param_names())
    if len(values) != expected:
        raise DomainError(f"{name} takes {expected} parameters, got {len(values)}")
    return cls(*values)
