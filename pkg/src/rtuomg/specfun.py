"""Special functions used by the distribution and moment code.

Lambert W on the lower real branch, log-gamma and beta functions, the
lower incomplete beta function, the Gauss hypergeometric function on
[-1, 1), its incomplete variant and an adaptive quadrature wrapper that
serves as the numerical oracle throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "lambert_w_minus1",
    "lambert_w_minus1_from_log",
    "log_gamma",
    "beta_fn",
    "incomplete_beta",
    "gauss_2f1",
    "incomplete_2f1",
    "incomplete_2f1_series",
    "adaptive_quad",
]

_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite series.

    Attributes
    ----------
    rel_tol : float
        A term is negligible once it is below ``rel_tol * |partial sum|``.
    abs_tol : float
        Absolute floor added to the relative criterion.
    max_terms : int
        Hard cap on the number of terms.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_terms: int = 10000

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise DomainError("tolerances must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


DEFAULT_CONTROL = SeriesControl()


def _as_output(value, scalar):
    return float(value) if scalar else value


# ---------------------------------------------------------------------------
# Lambert W, branch -1


def _branch_point_guess(q):
    # series of W_{-1} about -1/e; q = 1 + e*xi >= 0
    t = -np.sqrt(2.0 * np.maximum(q, 0.0))
    return -1.0 + t - t * t / 3.0 + 11.0 / 72.0 * t**3


def lambert_w_minus1(xi):
    """Lower real branch of the Lambert W function.

    Solves ``w * exp(w) = xi`` for ``w <= -1`` by Halley iteration.

    Parameters
    ----------
    xi : float or array_like
        Argument in ``[-1/e, 0)``.

    Returns
    -------
    float or ndarray
    """
    scalar = np.ndim(xi) == 0
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(~np.isfinite(x)) or np.any(x >= 0.0) or np.any(x < -_INV_E * (1 + 4e-16)):
        raise DomainError("lambert_w_minus1 needs -1/e <= xi < 0")
    q = 1.0 + math.e * x
    near = q < 0.25
    w = np.empty_like(x)
    w[near] = _branch_point_guess(q[near])
    far = ~near
    if np.any(far):
        l1 = np.log(-x[far])
        l2 = np.log(-l1)
        w[far] = l1 - l2 + l2 / l1
    w = np.minimum(w, -1.0)
    active = q > 0.0
    w[~active] = -1.0
    for _ in range(60):
        if not np.any(active):
            break
        wa = w[active]
        ew = np.exp(wa)
        f = wa * ew - x[active]
        wp1 = wa + 1.0
        denom = ew * wp1 - (wa + 2.0) * f / (2.0 * wp1)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(wp1 != 0.0, f / denom, 0.0)
        wn = np.minimum(wa - step, -1.0)
        w[active] = wn
        done = np.abs(step) <= 4e-16 * np.abs(wn)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return _as_output(w[0] if scalar else w, scalar)


def lambert_w_minus1_from_log(log_neg_xi):
    """Lower Lambert branch with the argument given as ``log(-xi)``.

    Solves ``w + log(-w) = log_neg_xi`` for ``w <= -1``. This is the
    log of the defining identity and stays usable when ``xi`` itself
    underflows.

    Parameters
    ----------
    log_neg_xi : float or array_like
        Value(s) of ``log(-xi)``; must not exceed -1.
    """
    scalar = np.ndim(log_neg_xi) == 0
    L = np.atleast_1d(np.asarray(log_neg_xi, dtype=float))
    if np.any(np.isnan(L)) or np.any(L > -1.0 + 1e-15):
        if np.any(np.isnan(L)) or np.any(L > -1.0 + 4e-15):
            raise DomainError("lambert_w_minus1_from_log needs log(-xi) <= -1")
        L = np.minimum(L, -1.0)
    # 1 + e*xi = 1 - exp(L + 1) = -expm1(L + 1)
    q = -np.expm1(L + 1.0)
    near = q < 0.25
    w = np.empty_like(L)
    w[near] = _branch_point_guess(q[near])
    far = ~near
    if np.any(far):
        Lf = L[far]
        w[far] = Lf - np.log(-Lf)
        # one extra correction of the asymptotic guess
        w[far] = Lf - np.log(-w[far])
    w = np.minimum(w, -1.0)
    active = q > 0.0
    w[~active] = -1.0
    for _ in range(60):
        if not np.any(active):
            break
        wa = w[active]
        g = wa + np.log(-wa) - L[active]
        g1 = 1.0 + 1.0 / wa
        g2 = -1.0 / (wa * wa)
        denom = g1 - 0.5 * g * g2 / np.where(g1 != 0.0, g1, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(denom != 0.0, g / denom, 0.0)
        wn = np.minimum(wa - step, -1.0)
        w[active] = wn
        done = np.abs(step) <= 4e-16 * np.abs(wn)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return _as_output(w[0] if scalar else w, scalar)


# ---------------------------------------------------------------------------
# gamma / beta


def log_gamma(a: float) -> float:
    """Natural log of the gamma function for ``a > 0``."""
    if not a > 0:
        raise DomainError(f"log_gamma needs a > 0, got {a!r}")
    return math.lgamma(a)


def beta_fn(a: float, b: float) -> float:
    """Complete beta function ``B(a, b)``."""
    if not (a > 0 and b > 0):
        raise DomainError(f"beta_fn needs positive arguments, got ({a!r}, {b!r})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def incomplete_beta(lam: float, m: float, n: float) -> float:
    """Unregularized lower incomplete beta ``int_0^lam t^(m-1) (1-t)^(n-1) dt``."""
    if not (m > 0 and n > 0):
        raise DomainError("incomplete_beta needs m > 0 and n > 0")
    if not 0.0 <= lam < 1.0:
        raise DomainError("incomplete_beta needs 0 <= lam < 1")
    if lam == 0.0:
        return 0.0
    return float(special.betainc(m, n, lam)) * beta_fn(m, n)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function


def _hyp_series(a, b, c, z, ctrl):
    """Vectorized defining series; all arguments broadcast, |z| assumed < 1."""
    term = np.ones(np.broadcast(a, b, c, z).shape)
    total = term.copy()
    a, b, c, z = np.broadcast_arrays(a, b, c, z)
    small = np.zeros(term.shape, dtype=int)
    for i in range(ctrl.max_terms):
        term = term * (a + i) * (b + i) / ((c + i) * (i + 1.0)) * z
        total = total + term
        tiny = np.abs(term) <= ctrl.rel_tol * np.abs(total) + ctrl.abs_tol
        small = np.where(tiny, small + 1, 0)
        if np.all(small >= 3):
            return total
    raise ConvergenceError(
        f"hypergeometric series did not converge in {ctrl.max_terms} terms"
    )


def gauss_2f1(a, b, c, z, ctrl: SeriesControl = DEFAULT_CONTROL):
    """Gauss hypergeometric function ``2F1(a, b; c; z)`` for ``z`` in [-1, 1).

    Arguments below -1/2 are mapped with the Pfaff transformation
    ``2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`` so the series
    is always summed at ``|z| <= 1/2`` on the negative side. All arguments
    broadcast; a scalar call returns a float.
    """
    scalar = all(np.ndim(v) == 0 for v in (a, b, c, z))
    a, b, c, z = (np.asarray(v, dtype=float) for v in (a, b, c, z))
    if np.any((c <= 0) & (c == np.round(c))):
        raise DomainError("2F1 undefined for c a nonpositive integer")
    if np.any(z < -1.0) or np.any(z >= 1.0):
        raise DomainError("gauss_2f1 needs -1 <= z < 1")
    neg = z < -0.5
    zz = np.where(neg, z / (z - 1.0), z)
    bb = np.where(neg, c - b, b)
    pref = np.where(neg, (1.0 - z) ** (-a), 1.0)
    out = pref * _hyp_series(a, bb, c, zz, ctrl)
    return _as_output(out, scalar) if scalar else out


def incomplete_2f1(a: float, b: float, c: float, lam: float, z: float,
                   tol: float = 1e-13) -> float:
    """Incomplete hypergeometric function with incomplete Pochhammer ratios.

    Evaluates ``sum_i (a)_i [b, c; lam]_i z^i / i!`` with
    ``[b, c; lam]_i = B_lam(b+i, c-b) / B(b, c-b)`` through its integral
    form ``B(b, c-b)^-1 int_0^lam y^(b-1) (1-y)^(c-b-1) (1-z y)^(-a) dy``.
    At ``lam = 1`` this is ``gauss_2f1(a, b, c, z)``.
    """
    if not c > b > 0:
        raise DomainError("incomplete_2f1 needs c > b > 0")
    if not 0.0 <= lam <= 1.0:
        raise DomainError("incomplete_2f1 needs 0 <= lam <= 1")
    if z * lam >= 1.0:
        raise DomainError("incomplete_2f1 needs z * lam < 1")
    if lam == 0.0:
        return 0.0
    d = c - b
    log_norm = math.lgamma(b) + math.lgamma(d) - math.lgamma(c)

    def log_kernel(y, log1m_y):
        return (b - 1.0) * math.log(y) + (d - 1.0) * log1m_y - a * math.log1p(-z * y) - log_norm

    return _integrate_to_lam(log_kernel, lam, tol)


def _integrate_to_lam(log_kernel, lam, tol):
    """``int_0^lam exp(log_kernel(y, log(1-y))) dy``.

    Above y = 1/2 the variable ``v = -log(1-y)`` is used, which turns a
    ``(1-y)^(d-1)`` factor into the smooth ``exp(-d v)`` and keeps the
    rule away from the near-singular point y = 1 when lam is close to it.
    """
    head = min(lam, 0.5)
    total = adaptive_quad(lambda y: math.exp(log_kernel(y, math.log1p(-y))), 0.0, head, tol / 2)
    if lam > 0.5:
        vmax = math.inf if lam == 1.0 else -math.log1p(-lam)

        def g(v):
            return math.exp(log_kernel(-math.expm1(-v), -v) - v)

        total += adaptive_quad(g, math.log(2.0), vmax, tol / 2)
    return total


def incomplete_2f1_series(a: float, b: float, c: float, lam: float, z: float,
                          ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Series form of :func:`incomplete_2f1`; reliable for ``lam`` well below 1."""
    if not c > b > 0:
        raise DomainError("incomplete_2f1 needs c > b > 0")
    if not 0.0 <= lam < 1.0:
        raise DomainError("series form needs 0 <= lam < 1")
    if lam == 0.0:
        return 0.0
    d = c - b
    bn = beta_fn(b, d)
    total = 0.0
    coef = 1.0  # (a)_i z^i / i!
    small = 0
    for i in range(ctrl.max_terms):
        term = coef * special.betainc(b + i, d, lam) * beta_fn(b + i, d) / bn
        total += term
        if abs(term) <= ctrl.rel_tol * abs(total) + ctrl.abs_tol:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
        coef *= (a + i) * z / (i + 1.0)
    raise ConvergenceError("incomplete 2F1 series did not converge")


# ---------------------------------------------------------------------------
# quadrature


def adaptive_quad(f: Callable[[float], float], lo: float, hi: float,
                  tol: float = 1e-10, limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``(lo, hi)``.

    Wraps QUADPACK's QAGS (21-point Kronrod rule with epsilon-algorithm
    extrapolation), which never samples the endpoints and so tolerates
    integrable endpoint singularities.

    Parameters
    ----------
    f : callable
        Scalar integrand.
    lo, hi : float
        Integration limits.
    tol : float
        Target absolute error.
    limit : int
        Maximum number of subintervals.

    Raises
    ------
    ConvergenceError
        If the error estimate stays above ``tol`` and is not explained by
        floating-point roundoff in the result.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if lo == hi:
        return 0.0
    value, err, info, *rest = integrate.quad(
        f, lo, hi, epsabs=tol, epsrel=0.0, limit=limit, full_output=1
    )
    if err <= tol or err <= 1e-14 * abs(value):
        return float(value)
    if err <= max(10.0 * tol, 1e-12 * abs(value)) and info["last"] < limit:
        # roundoff-limited (QUADPACK ier=2); the estimate is still sound
        return float(value)
    raise ConvergenceError(
        f"quadrature on ({lo}, {hi}) stalled with error estimate {err:.3g}"
    )
