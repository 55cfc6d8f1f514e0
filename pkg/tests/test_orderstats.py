import math

import numpy as np
import pytest
from scipy import integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from rtuomg.distributions import RtuomgParams, rtuomg_cdf, rtuomg_hazard, rtuomg_log_pdf, rtuomg_pdf
from rtuomg.errors import DomainError
from rtuomg.orderstats import (
    OrderSpec,
    extreme_pdfs,
    joint_records_log_pdf,
    lr_ordering_check,
    order_stat_cdf,
    order_stat_cdf_alternating,
    order_stat_pdf,
    order_stat_pdf_alternating,
    record_pdf,
)
from rtuomg.specfun import adaptive_quad

PRM = RtuomgParams(1.5, 0.4, 0.8)
GRID = np.linspace(0.02, 0.98, 20)


def closed_pdf(x, n, r, prm):
    F = rtuomg_cdf(x, prm)
    return math.factorial(n) / (math.factorial(r - 1) * math.factorial(n - r)) * F ** (r - 1) * (1 - F) ** (n - r) * rtuomg_pdf(x, prm)


def test_order_spec_validation():
    with pytest.raises(DomainError):
        OrderSpec(3, 4)
    with pytest.raises(DomainError):
        OrderSpec(0, 1)


def test_single_draw_is_parent():
    np.testing.assert_allclose(order_stat_pdf(GRID, OrderSpec(1, 1), PRM), rtuomg_pdf(GRID, PRM), rtol=1e-14)


def test_maximum_of_three():
    F = rtuomg_cdf(GRID, PRM)
    np.testing.assert_allclose(order_stat_pdf(GRID, OrderSpec(3, 3), PRM), 3 * F**2 * rtuomg_pdf(GRID, PRM), rtol=1e-12)


def test_order_pdf_normalization():
    spec = OrderSpec(5, 2)
    total = adaptive_quad(lambda x: order_stat_pdf(x, spec, PRM), 0.0, 1.0, tol=1e-11)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", range(1, 13))
def test_alternating_forms_match_closed(n):
    prm = RtuomgParams(0.8, 1.3, 0.4)
    for r in range(1, n + 1):
        spec = OrderSpec(n, r)
        closed = np.array([closed_pdf(x, n, r, prm) for x in GRID])
        np.testing.assert_allclose(order_stat_pdf(GRID, spec, prm), closed, rtol=1e-10, atol=1e-300)
        np.testing.assert_allclose(order_stat_pdf_alternating(GRID, spec, prm), closed, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(order_stat_cdf_alternating(GRID, spec, prm), order_stat_cdf(GRID, spec, prm),
                                   atol=1e-10)


def test_order_cdf_extremes():
    F = rtuomg_cdf(GRID, PRM)
    np.testing.assert_allclose(order_stat_cdf(GRID, OrderSpec(6, 1), PRM), 1 - (1 - F) ** 6, rtol=1e-12)
    np.testing.assert_allclose(order_stat_cdf(GRID, OrderSpec(6, 6), PRM), F**6, rtol=1e-12)


def test_order_cdf_derivative_is_pdf():
    spec = OrderSpec(7, 4)
    h = 1e-6
    for x in np.linspace(0.1, 0.9, 10):
        fd = (order_stat_cdf(x + h, spec, PRM) - order_stat_cdf(x - h, spec, PRM)) / (2 * h)
        assert fd == pytest.approx(order_stat_pdf(x, spec, PRM), abs=1e-6)


@given(st.integers(2, 12), st.floats(0.01, 0.99))
@settings(max_examples=60, deadline=None)
def test_order_cdfs_stochastically_ordered(n, x):
    vals = [order_stat_cdf(x, OrderSpec(n, r), PRM) for r in range(1, n + 1)]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_extremes():
    f = rtuomg_pdf(GRID, PRM)
    fmin, fmax = extreme_pdfs(GRID, 1, PRM)
    np.testing.assert_allclose(fmin, f, rtol=1e-14)
    np.testing.assert_allclose(fmax, f, rtol=1e-14)
    fmin, fmax = extreme_pdfs(GRID, 4, PRM)
    np.testing.assert_allclose(fmin, order_stat_pdf(GRID, OrderSpec(4, 1), PRM), rtol=1e-10)
    np.testing.assert_allclose(fmax, order_stat_pdf(GRID, OrderSpec(4, 4), PRM), rtol=1e-10)
    for k in (0, 1):
        total = adaptive_quad(lambda x: extreme_pdfs(x, 4, PRM)[k], 0.0, 1.0, tol=1e-11)
        assert total == pytest.approx(1.0, abs=1e-8)


def test_records_first_is_parent():
    f = rtuomg_pdf(GRID, PRM)
    np.testing.assert_allclose(record_pdf(GRID, 1, "upper", PRM), f, rtol=1e-14)
    np.testing.assert_allclose(record_pdf(GRID, 1, "lower", PRM), f, rtol=1e-14)


def test_record_normalization():
    prm = RtuomgParams(0.3, 0.4, 0.8)
    # upper records of a small-alpha law pile up near 1, so the mass above 1/2
    # comes from the Gamma(2, 1) law of t = -log(1 - F) at the second record
    head = adaptive_quad(lambda x: record_pdf(x, 2, "upper", prm), 0.0, 0.5, tol=1e-12)
    S = 1 - rtuomg_cdf(0.5, prm)
    t0 = -math.log(S)
    # P(U_2 > 1/2) = (1 + t0) e^{-t0}
    assert head + (1 + t0) * S == pytest.approx(1.0, abs=1e-8)
    low = adaptive_quad(lambda x: record_pdf(x, 3, "lower", PRM), 0.0, 1.0, tol=1e-11)
    assert low == pytest.approx(1.0, abs=1e-8)
    up = adaptive_quad(lambda x: record_pdf(x, 2, "upper", PRM), 0.0, 1.0, tol=1e-11)
    assert up == pytest.approx(1.0, abs=1e-8)


def test_record_survival_log_identity():
    F = rtuomg_cdf(GRID, PRM)
    f = rtuomg_pdf(GRID, PRM)
    np.testing.assert_allclose(record_pdf(GRID, 2, "upper", PRM), -np.log1p(-F) * f, rtol=1e-10)
    np.testing.assert_allclose(record_pdf(GRID, 2, "lower", PRM), -np.log(F) * f, rtol=1e-10)


def test_upper_records_move_right():
    m1 = adaptive_quad(lambda x: x * record_pdf(x, 1, "upper", PRM), 0.0, 1.0, tol=1e-11)
    m2 = adaptive_quad(lambda x: x * record_pdf(x, 2, "upper", PRM), 0.0, 1.0, tol=1e-11)
    assert m2 > m1


def test_record_validation():
    with pytest.raises(DomainError):
        record_pdf(0.5, 0, "upper", PRM)
    with pytest.raises(DomainError):
        record_pdf(0.5, 2, "middle", PRM)


def test_joint_records():
    assert joint_records_log_pdf([0.4], PRM) == pytest.approx(rtuomg_log_pdf(0.4, PRM), rel=1e-15)
    val = joint_records_log_pdf([0.3, 0.6], PRM)
    assert math.exp(val) == pytest.approx(rtuomg_hazard(0.3, PRM) * rtuomg_pdf(0.6, PRM), rel=1e-10)
    with pytest.raises(DomainError):
        joint_records_log_pdf([0.6, 0.3], PRM)
    with pytest.raises(DomainError):
        joint_records_log_pdf([], PRM)


def test_joint_records_normalization():
    # x = t^(1/beta) removes the x^(beta-1) endpoint singularity in both variables
    k = 1.0 / PRM.beta

    def g(t2, t1):
        r1, r2 = t1**k, t2**k
        if not r1 < r2 < 1.0:
            return 0.0
        return math.exp(joint_records_log_pdf([r1, r2], PRM)) * k * k * (t1 * t2) ** (k - 1)

    total, _ = integrate.dblquad(g, 0.0, 1.0, lambda t1: t1, 1.0, epsabs=1e-7, epsrel=1e-7)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_lr_ordering_documented_case():
    check = lr_ordering_check(RtuomgParams(2.0, 1.4, 0.7), RtuomgParams(1.0, 1.4, 0.7))
    # the ratio is not monotone for this p: the record factor overturns it near the left end
    assert check.holds is False
    assert check.max_violation > 1e-4


def test_lr_ordering_holds_for_small_p():
    check = lr_ordering_check(RtuomgParams(2.0, 1.4, 0.3), RtuomgParams(1.0, 1.4, 0.3))
    assert check.holds and check.max_violation == 0.0


def test_lr_ordering_identical():
    prm = RtuomgParams(1.0, 1.4, 0.7)
    check = lr_ordering_check(prm, prm)
    assert check.holds and check.max_violation == 0.0


def test_lr_ordering_swapped_direction():
    a, b = RtuomgParams(1.0, 1.4, 0.3), RtuomgParams(2.0, 1.4, 0.3)
    assert not lr_ordering_check(a, b).holds
    assert lr_ordering_check(b, a).holds


@given(st.floats(0.2, 5.0), st.floats(0.2, 5.0), st.floats(0.2, 4.0), st.floats(0.0, 0.5))
@settings(max_examples=60, deadline=None)
def test_lr_order_implies_cdf_order(a1, a2, b, p):
    if a1 <= a2:
        a1, a2 = a2 + 1e-3, a1
    p1, p2 = RtuomgParams(a1, b, p), RtuomgParams(a2, b, p)
    if lr_ordering_check(p1, p2, grid_size=200).holds:
        assert np.all(rtuomg_cdf(GRID, p1) >= rtuomg_cdf(GRID, p2) - 1e-14)


def test_lr_validation():
    with pytest.raises(DomainError):
        lr_ordering_check(RtuomgParams(2, 1, 0.5), RtuomgParams(1, 2, 0.5))
    with pytest.raises(DomainError):
        lr_ordering_check(RtuomgParams(2, 1, 0.5), RtuomgParams(1, 1, 0.5), grid_size=5)
