"""Parameter estimation: maximum likelihood and four minimum-distance fits.

All fits run on an unconstrained scale: positive parameters through
``log`` and unit-interval parameters through ``logit`` of the value
clamped to ``[eps, 1 - eps]``. Objectives are minimized with BFGS
(strong Wolfe line search) and fall back to Nelder-Mead when the line
search fails or the iteration budget runs out.

For RTUOMG the likelihood score and the cdf gradients used by the
distance objectives are analytic. Competitor models use central finite
differences.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import line_search

from .distributions import MODELS, DistributionModel
from .errors import DegenerateDataError, DomainError
from .gof import F_CLAMP_HI, F_CLAMP_LO, ad_from_F, cvm_from_F

__all__ = [
    "METHODS", "ParamTransform", "OptimControl", "OptimResult", "FitOptions",
    "FitResult", "neg_log_likelihood", "score", "ols_objective",
    "wls_objective", "cvm_objective", "ad_objective", "wls_weights",
    "objective_and_gradient", "minimize_nelder_mead", "minimize_bfgs", "fit",
    "std_errors_ml", "DEFAULT_STARTS", "RTUOMG_TRANSFORM",
]

METHODS = ("ml", "ols", "wls", "cvm", "ad")
_EPS = 1e-6


# ---------------------------------------------------------------------------
# parameter transform


@dataclass(frozen=True)
class ParamTransform:
    """Elementwise map between model parameters and an unconstrained vector.

    ``kinds[j]`` is ``"log"`` for a positive parameter or ``"logit"`` for
    one in the unit interval; logit arguments are clamped to
    ``[eps, 1 - eps]`` in both directions.
    """

    kinds: tuple[str, ...]
    eps: float = _EPS

    def to_theta(self, values) -> np.ndarray:
        out = np.empty(len(self.kinds))
        for j, (k, v) in enumerate(zip(self.kinds, values)):
            if k == "log":
                out[j] = math.log(v)
            else:
                c = min(max(v, self.eps), 1.0 - self.eps)
                out[j] = math.log(c) - math.log1p(-c)
        return out

    def from_theta(self, theta) -> tuple[float, ...]:
        out = []
        for k, t in zip(self.kinds, theta):
            if k == "log":
                out.append(math.exp(t))
            else:
                c = 1.0 / (1.0 + math.exp(-t)) if t > -700 else 0.0
                out.append(min(max(c, self.eps), 1.0 - self.eps))
        return tuple(out)

    def jacobian(self, theta) -> np.ndarray:
        """``d value / d theta`` per coordinate (zero where clamped)."""
        out = np.empty(len(self.kinds))
        for j, (k, t) in enumerate(zip(self.kinds, theta)):
            if k == "log":
                out[j] = math.exp(t)
            else:
                c = 1.0 / (1.0 + math.exp(-t)) if t > -700 else 0.0
                out[j] = c * (1.0 - c) if self.eps < c < 1.0 - self.eps else 0.0
        return out


RTUOMG_TRANSFORM = ParamTransform(("log", "log", "logit"))


def _transform_for(model_cls) -> ParamTransform:
    return ParamTransform(tuple(model_cls.transforms))


# ---------------------------------------------------------------------------
# RTUOMG pieces shared by the objectives


class _Pieces(NamedTuple):
    L: np.ndarray      # log((1 + x^b) / (1 - x^b))
    Lb: np.ndarray     # dL / db
    w: np.ndarray      # exp(-a L)
    D: np.ndarray      # 1 - p + p a L
    lx: np.ndarray
    y2: np.ndarray     # x^(2b) / (1 - x^(2b))


def _pieces(x, a, b, p):
    lx = np.log(x)
    y = np.exp(b * lx)
    t = b * lx
    log1m_y = np.where(t < -0.7, np.log1p(-y), np.log(-np.expm1(t)))
    L = np.log1p(y) - log1m_y
    one_m_y2 = -np.expm1(2.0 * t)
    Lb = 2.0 * y * lx / one_m_y2
    w = np.exp(-a * L)
    D = (1.0 - p) + p * a * L
    return _Pieces(L, Lb, w, D, lx, y * y / one_m_y2)


def _loglik_terms(x, a, b, p, pc=None):
    pc = pc or _pieces(x, a, b, p)
    return (math.log(2.0) + math.log(a) + math.log(b) + (b - 1.0) * pc.lx + np.log1p(pc.y2)
            - a * pc.L + np.log(pc.D))


def _score_original(x, a, b, p):
    """Log-likelihood and its gradient in (alpha, beta, p)."""
    pc = _pieces(x, a, b, p)
    ll = float(np.sum(_loglik_terms(x, a, b, p, pc)))
    da = np.sum(1.0 / a - pc.L + p * pc.L / pc.D)
    db = np.sum(1.0 / b + pc.lx + 2.0 * pc.y2 * pc.lx - a * pc.Lb + p * a * pc.Lb / pc.D)
    dp = np.sum((a * pc.L - 1.0) / pc.D)
    return ll, np.array([da, db, dp])


def _log_ratio(x, b):
    """``log((1 + x^b) / (1 - x^b))``."""
    t = b * np.log(x)
    y = np.exp(t)
    return np.log1p(y) - np.where(t < -0.7, np.log1p(-y), np.log(-np.expm1(t)))


def _cdf_from_l(l, w, p):
    # 1 - w + p w l, summed as a series where it cancels
    F = -np.expm1(l) + p * w * l
    small = np.abs(l) < 0.05
    if np.any(small):
        ls = l[small]
        acc = np.zeros_like(ls)
        pw = np.ones_like(ls)
        for k in range(1, 13):
            pw = pw * ls / k
            acc = acc + pw * (1.0 - p * k)
        F[small] = -acc
    return np.clip(F, 0.0, 1.0)


def _cdf_values(x, a, b, p):
    """RTUOMG cdf at x, without derivatives."""
    l = -a * _log_ratio(x, b)
    return _cdf_from_l(l, np.exp(l), p)


def _cdf_and_grad(x, a, b, p):
    """RTUOMG cdf at x and its gradient in (alpha, beta, p), shape (3, n)."""
    pc = _pieces(x, a, b, p)
    F = _cdf_from_l(-a * pc.L, pc.w, p)
    grad = np.vstack([pc.w * pc.L * pc.D, pc.w * a * pc.Lb * pc.D, -pc.w * a * pc.L])
    return F, grad


def _unpack_theta(theta):
    a, b, p = RTUOMG_TRANSFORM.from_theta(theta)
    return a, b, p, RTUOMG_TRANSFORM.jacobian(theta)


def _as_data(data):
    x = np.asarray(data, dtype=float).ravel()
    return x


# ---------------------------------------------------------------------------
# objectives on the unconstrained scale (RTUOMG)


def neg_log_likelihood(theta, data) -> float:
    """``-sum log f(x_i)`` at ``theta = (log a, log b, logit p)``."""
    x = _as_data(data)
    if x.size == 0:
        return 0.0
    a, b, p, _ = _unpack_theta(theta)
    return -float(np.sum(_loglik_terms(x, a, b, p)))


def score(theta, data) -> np.ndarray:
    """Gradient of the log-likelihood with respect to ``theta``."""
    x = _as_data(data)
    if x.size == 0:
        return np.zeros(3)
    a, b, p, jac = _unpack_theta(theta)
    _, g = _score_original(x, a, b, p)
    return g * jac


def wls_weights(n: int) -> np.ndarray:
    """``(n+1)^2 (n+2) / (i (n-i+1))``, the inverse variances of U_(i)."""
    i = np.arange(1, n + 1, dtype=float)
    return (n + 1.0) ** 2 * (n + 2.0) / (i * (n - i + 1.0))


def _distance_from_F(kind, F, weights=None):
    n = F.size
    i = np.arange(1, n + 1, dtype=float)
    if kind == "ols":
        return float(np.sum((F - i / (n + 1.0)) ** 2))
    if kind == "wls":
        w = wls_weights(n) if weights is None else np.asarray(weights, dtype=float)
        return float(np.sum(w * (F - i / (n + 1.0)) ** 2))
    if kind == "cvm":
        return cvm_from_F(F)
    if kind == "ad":
        return ad_from_F(F)
    raise DomainError(f"unknown distance {kind!r}")


def _distance_grad_F(kind, F, weights=None):
    """Derivative of the distance with respect to each F_i."""
    n = F.size
    i = np.arange(1, n + 1, dtype=float)
    if kind == "ols":
        return 2.0 * (F - i / (n + 1.0))
    if kind == "wls":
        w = wls_weights(n) if weights is None else np.asarray(weights, dtype=float)
        return 2.0 * w * (F - i / (n + 1.0))
    if kind == "cvm":
        return 2.0 * (F - (2.0 * i - 1.0) / (2.0 * n))
    if kind == "ad":
        inside = (F > F_CLAMP_LO) & (F < F_CLAMP_HI)
        Fc = np.clip(F, F_CLAMP_LO, F_CLAMP_HI)
        # F_i enters as log F_i with weight (2i-1) and as log(1-F_i) with weight (2(n+1-i)-1)
        g = -((2.0 * i - 1.0) / Fc - (2.0 * (n + 1.0 - i) - 1.0) / (1.0 - Fc)) / n
        return np.where(inside, g, 0.0)
    raise DomainError(f"unknown distance {kind!r}")


def _sorted_data(data):
    return np.sort(_as_data(data))


def ols_objective(theta, sorted_data) -> float:
    """``sum (F(x_(i)) - i/(n+1))^2``."""
    x = _sorted_data(sorted_data)
    a, b, p, _ = _unpack_theta(theta)
    return _distance_from_F("ols", _cdf_values(x, a, b, p))


def wls_objective(theta, sorted_data, weights=None) -> float:
    """Weighted least squares; ``weights`` defaults to :func:`wls_weights`."""
    x = _sorted_data(sorted_data)
    a, b, p, _ = _unpack_theta(theta)
    return _distance_from_F("wls", _cdf_values(x, a, b, p), weights)


def cvm_objective(theta, sorted_data) -> float:
    """``1/(12n) + sum (F(x_(i)) - (2i-1)/(2n))^2``."""
    x = _sorted_data(sorted_data)
    a, b, p, _ = _unpack_theta(theta)
    return _distance_from_F("cvm", _cdf_values(x, a, b, p))


def ad_objective(theta, sorted_data) -> float:
    """Anderson-Darling ``A^2`` of the sample under the model."""
    x = _sorted_data(sorted_data)
    a, b, p, _ = _unpack_theta(theta)
    return _distance_from_F("ad", _cdf_values(x, a, b, p))


def _rtuomg_objective(method, x):
    """(f, grad) on theta for RTUOMG with analytic derivatives."""
    def guarded(fun):
        def wrapped(theta):
            try:
                a, b, p, _ = _unpack_theta(theta)
            except OverflowError:
                return math.inf
            if not (0.0 < a < math.inf and 0.0 < b < math.inf):
                return math.inf
            try:
                with np.errstate(all="ignore"):
                    v = fun(a, b, p)
            except (ValueError, OverflowError, ZeroDivisionError):
                return math.inf
            return v if math.isfinite(v) else math.inf
        return wrapped

    if method == "ml":
        f = guarded(lambda a, b, p: -float(np.sum(_loglik_terms(x, a, b, p))))

        def g(theta):
            with np.errstate(all="ignore"):
                return -score(theta, x)

        return f, g

    f = guarded(lambda a, b, p: _distance_from_F(method, _cdf_values(x, a, b, p)))

    def g(theta):
        a, b, p, jac = _unpack_theta(theta)
        with np.errstate(all="ignore"):
            F, dF = _cdf_and_grad(x, a, b, p)
            return (dF @ _distance_grad_F(method, F)) * jac

    return f, g


def _fd_gradient(f, step=1e-7):
    def g(theta):
        theta = np.asarray(theta, dtype=float)
        out = np.empty_like(theta)
        for j in range(theta.size):
            h = step * (1.0 + abs(theta[j]))
            e = np.zeros_like(theta)
            e[j] = h
            out[j] = (f(theta + e) - f(theta - e)) / (2.0 * h)
        return out
    return g


def _generic_objective(model_cls, method, x):
    tr = _transform_for(model_cls)

    def f(theta):
        try:
            with np.errstate(all="ignore"):
                m = model_cls(*tr.from_theta(theta))
                if method == "ml":
                    v = -float(np.sum(m.log_pdf(x)))
                else:
                    v = _distance_from_F(method, np.asarray(m.cdf(x), dtype=float))
        except (DomainError, OverflowError, ValueError, ZeroDivisionError):
            return math.inf
        return v if math.isfinite(v) else math.inf

    return f, _fd_gradient(f)


def objective_and_gradient(method: str, data, model: str = "rtuomg"):
    """Objective to minimize on the unconstrained scale and its gradient.

    Distance methods sort the data first. For ``ml`` the objective is
    the negative log-likelihood.
    """
    method = method.lower()
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    x = _as_data(data) if method == "ml" else _sorted_data(data)
    if model == "rtuomg":
        return _rtuomg_objective(method, x)
    return _generic_objective(MODELS[model], method, x)


# ---------------------------------------------------------------------------
# optimizers


@dataclass(frozen=True)
class OptimControl:
    gtol: float = 1e-8
    max_iter_bfgs: int = 500
    max_iter_nm: int = 5000
    nm_ftol: float = 1e-10
    nm_xtol: float = 1e-8
    nm_step: float = 0.25
    nm_fallback_step: float = 0.01
    c1: float = 1e-4
    c2: float = 0.9


class OptimResult(NamedTuple):
    theta: np.ndarray
    value: float
    iterations: int
    converged: bool
    message: str = ""


def minimize_nelder_mead(objective: Callable, theta0, ctrl: OptimControl = OptimControl(),
                         step: float | None = None) -> OptimResult:
    """Downhill simplex with reflection 1, expansion 2, contraction 1/2, shrink 1/2.

    Stops when the spread of simplex values is below ``nm_ftol`` and every
    vertex lies within ``nm_xtol`` (max norm) of the best one; then
    restarts once from the incumbent with a fresh simplex. The initial
    simplex offsets coordinate j by ``step * max(1, |theta_j|)`` with
    ``step`` defaulting to ``ctrl.nm_step``.
    """
    step = ctrl.nm_step if step is None else step
    x0 = np.asarray(theta0, dtype=float)
    f0 = objective(x0)
    if not math.isfinite(f0):
        raise DomainError("objective is not finite at the starting point")
    dim = x0.size
    iters = 0
    best_x, best_f = x0, f0
    converged = False
    for restart in range(2):
        simplex = [best_x.copy()]
        for j in range(dim):
            v = best_x.copy()
            v[j] += step * max(1.0, abs(v[j])) if restart == 0 else step * 0.1
            simplex.append(v)
        vals = [best_f] + [objective(v) for v in simplex[1:]]
        converged = False
        while iters < ctrl.max_iter_nm:
            order = np.argsort(vals, kind="stable")
            simplex = [simplex[k] for k in order]
            vals = [vals[k] for k in order]
            size = max(np.max(np.abs(v - simplex[0])) for v in simplex[1:])
            if vals[-1] - vals[0] < ctrl.nm_ftol and size < ctrl.nm_xtol:
                converged = True
                break
            iters += 1
            centroid = np.mean(simplex[:-1], axis=0)
            worst = simplex[-1]
            xr = centroid + (centroid - worst)
            fr = objective(xr)
            if vals[0] <= fr < vals[-2]:
                simplex[-1], vals[-1] = xr, fr
                continue
            if fr < vals[0]:
                xe = centroid + 2.0 * (centroid - worst)
                fe = objective(xe)
                if fe < fr:
                    simplex[-1], vals[-1] = xe, fe
                else:
                    simplex[-1], vals[-1] = xr, fr
                continue
            if fr < vals[-1]:
                xc = centroid + 0.5 * (xr - centroid)
                fc = objective(xc)
                if fc <= fr:
                    simplex[-1], vals[-1] = xc, fc
                    continue
            else:
                xc = centroid + 0.5 * (worst - centroid)
                fc = objective(xc)
                if fc < vals[-1]:
                    simplex[-1], vals[-1] = xc, fc
                    continue
            for k in range(1, len(simplex)):
                simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0])
                vals[k] = objective(simplex[k])
        k = int(np.argmin(vals))
        best_x, best_f = simplex[k], vals[k]
        if not converged:
            break
    return OptimResult(best_x, float(best_f), iters, converged,
                       "" if converged else "iteration limit reached")


def minimize_bfgs(objective: Callable, gradient: Callable, theta0,
                  ctrl: OptimControl = OptimControl()) -> OptimResult:
    """Quasi-Newton minimization with an inverse-Hessian BFGS update.

    Step lengths satisfy the strong Wolfe conditions (``c1``, ``c2``).
    Converged when the gradient's Euclidean norm drops below ``gtol``.
    A failed line search ends the run with ``converged=False`` and
    message ``"line search failed"``.
    """
    x = np.asarray(theta0, dtype=float).copy()
    fx = objective(x)
    if not math.isfinite(fx):
        raise DomainError("objective is not finite at the starting point")
    g = gradient(x)
    n = x.size
    H = np.eye(n)
    first = True
    for it in range(ctrl.max_iter_bfgs):
        if np.linalg.norm(g) < ctrl.gtol:
            return OptimResult(x, fx, it, True)
        d = -H @ g
        if g @ d >= 0:
            H = np.eye(n)
            d = -g
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            step, _, _, f_new, _, g_new = line_search(
                objective, gradient, x, d, gfk=g, old_fval=fx, c1=ctrl.c1, c2=ctrl.c2, maxiter=20)
        if step is None or f_new is None or not math.isfinite(f_new):
            return OptimResult(x, fx, it, False, "line search failed")
        s = step * d
        x_new = x + s
        if g_new is None:
            g_new = gradient(x_new)
        yv = g_new - g
        sy = s @ yv
        if sy > 1e-300:
            if first:
                H = np.eye(n) * (sy / (yv @ yv))
                first = False
            rho = 1.0 / sy
            Hy = H @ yv
            H = H - rho * (np.outer(s, Hy) + np.outer(Hy, s)) + (rho * rho * (yv @ Hy) + rho) * np.outer(s, s)
        x, fx, g = x_new, float(f_new), g_new
    converged = bool(np.linalg.norm(g) < ctrl.gtol)
    return OptimResult(x, fx, ctrl.max_iter_bfgs, converged,
                       "" if converged else "iteration limit reached")


# ---------------------------------------------------------------------------
# fitting


DEFAULT_STARTS: dict[str, tuple[tuple[float, ...], ...]] = {
    "rtuomg": tuple(itertools.product((0.5, 2.0, 8.0), (0.5, 1.0, 3.0), (0.1, 0.5, 0.9))),
    "uomg": tuple(itertools.product((0.5, 2.0, 8.0), (0.5, 1.0, 3.0))),
    "cug": tuple(itertools.product((0.1, 0.3, 0.6), (0.05, 0.5, 3.0))),
    "cul": tuple(itertools.product((0.1, 0.3, 0.6), (0.1, 1.0, 5.0))),
    "uw": tuple(itertools.product((0.1, 1.0, 5.0), (0.5, 1.0, 3.0))),
}


@dataclass(frozen=True)
class FitOptions:
    """Settings for :func:`fit`.

    Attributes
    ----------
    model : str
        Registry name of the family.
    starts : sequence of tuples, optional
        Starting parameter values; defaults to the family's lattice.
    screen : int, optional
        Only optimize from the ``screen`` starts with the lowest initial
        objective (lattice order breaks ties). ``None`` uses all starts.
    std_errors : bool
        Compute observed-information standard errors for ML fits.
    control : OptimControl
    """

    model: str = "rtuomg"
    starts: tuple | None = None
    screen: int | None = None
    std_errors: bool = True
    control: OptimControl = field(default_factory=OptimControl)


@dataclass
class FitResult:
    """Outcome of one fit.

    ``objective_value`` is the maximized log-likelihood for ML and the
    minimized distance otherwise. ``loglik`` is always the log-likelihood
    at the estimates.
    """

    model: DistributionModel
    method: str
    objective_value: float
    loglik: float
    std_errors: tuple[float, ...] | None
    converged: bool
    iterations: int
    optimizer: str
    n_starts: int = 0

    @property
    def params(self):
        return self.model.params

    @property
    def values(self) -> tuple[float, ...]:
        return self.model.values()


def _check_data(x, k):
    if x.size < k + 1:
        raise DegenerateDataError(f"need at least {k + 1} observations, got {x.size}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0) or np.any(x >= 1.0):
        raise DegenerateDataError("observations must lie strictly inside (0, 1)")
    if np.all(x == x[0]):
        raise DegenerateDataError("all observations are tied")


def _optimize_from(f, g, theta0, ctrl):
    res = minimize_bfgs(f, g, theta0, ctrl)
    if res.converged:
        return res, "bfgs", res.iterations
    nm = minimize_nelder_mead(f, res.theta, ctrl, step=ctrl.nm_fallback_step)
    if nm.value <= res.value:
        return nm, "bfgs+nelder-mead", res.iterations + nm.iterations
    return OptimResult(res.theta, res.value, res.iterations, nm.converged, nm.message), \
        "bfgs+nelder-mead", res.iterations + nm.iterations


def fit(data, method: str = "ml", options: FitOptions | None = None) -> FitResult:
    """Fit a model by one of ``ml, ols, wls, cvm, ad``.

    Every start of the lattice (or the screened subset) is optimized and
    the lowest objective wins; earlier starts win exact ties.
    """
    options = options or FitOptions()
    method = method.lower()
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    if options.model not in MODELS:
        raise DomainError(f"unknown model {options.model!r}")
    model_cls = MODELS[options.model]
    tr = _transform_for(model_cls)
    x = _as_data(data)
    _check_data(x, len(tr.kinds))
    f, g = objective_and_gradient(method, x, options.model)

    starts = options.starts or DEFAULT_STARTS[options.model]
    thetas = [tr.to_theta(s) for s in starts]
    if options.screen is not None and options.screen < len(thetas):
        vals = [f(t) for t in thetas]
        order = sorted(range(len(thetas)), key=lambda j: (vals[j], j))
        thetas = [thetas[j] for j in sorted(order[: options.screen])]

    best = None
    for theta0 in thetas:
        if not math.isfinite(f(theta0)):
            continue
        res, label, iters = _optimize_from(f, g, theta0, options.control)
        if best is None or res.value < best[0].value:
            best = (res, label, iters)
    if best is None:
        raise DegenerateDataError("objective not finite at any starting point")
    res, label, iters = best
    model = model_cls(*tr.from_theta(res.theta))
    loglik = float(np.sum(model.log_pdf(x)))
    value = -res.value if method == "ml" else res.value
    se = None
    if method == "ml" and options.std_errors:
        se = std_errors_ml(res.theta, x, options.model)
    return FitResult(model, method, value, loglik, se, res.converged, iters, label, len(thetas))


# ---------------------------------------------------------------------------
# standard errors


def _observed_information(values, x, model_name):
    v = np.asarray(values, dtype=float)
    k = v.size
    H = np.empty((k, k))
    if model_name == "rtuomg":
        for j in range(k):
            h = 1e-5 * (1.0 + abs(v[j]))
            e = np.zeros(k)
            e[j] = h
            gp = _score_original(x, *(v + e))[1]
            gm = _score_original(x, *(v - e))[1]
            H[:, j] = (gp - gm) / (2.0 * h)
    else:
        cls = MODELS[model_name]

        def ll(w):
            return float(np.sum(cls(*w).log_pdf(x)))

        hs = 1e-4 * (1.0 + np.abs(v))
        for i in range(k):
            for j in range(i, k):
                ei = np.zeros(k)
                ej = np.zeros(k)
                ei[i] = hs[i]
                ej[j] = hs[j]
                val = (ll(v + ei + ej) - ll(v + ei - ej) - ll(v - ei + ej) + ll(v - ei - ej)) / (4 * hs[i] * hs[j])
                H[i, j] = H[j, i] = val
    return -0.5 * (H + H.T)


def std_errors_ml(theta_hat, data, model: str = "rtuomg") -> tuple[float, ...] | None:
    """Square roots of the diagonal of the inverse observed information.

    The information is the negative Hessian of the log-likelihood in the
    original parameters, from central differences (of the analytic score
    for RTUOMG, of the log-likelihood otherwise). Returns ``None`` with a
    warning when the estimate sits on a parameter bound or the matrix is
    not positive definite.
    """
    cls = MODELS[model]
    tr = _transform_for(cls)
    values = np.asarray(tr.from_theta(theta_hat), dtype=float)
    x = _as_data(data)
    for kind, v in zip(tr.kinds, values):
        h = 1e-5 * (1.0 + abs(v))
        if kind == "logit" and not (h < v < 1.0 - h):
            warnings.warn("estimate on the unit-interval bound; standard errors omitted", RuntimeWarning)
            return None
        if kind == "log" and not v > 1e-4 * (1.0 + v):
            warnings.warn("estimate at the positivity bound; standard errors omitted", RuntimeWarning)
            return None
    try:
        with np.errstate(all="ignore"):
            info = _observed_information(values, x, model)
        chol = np.linalg.cholesky(info)
    except (np.linalg.LinAlgError, DomainError, ValueError):
        warnings.warn("observed information not positive definite; standard errors omitted", RuntimeWarning)
        return None
    inv = np.linalg.inv(chol)
    cov = inv.T @ inv
    return tuple(float(math.sqrt(c)) for c in np.diag(cov))
