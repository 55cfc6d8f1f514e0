import csv
import math
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtuomg.distributions import RtuomgParams, Uomg, rtuomg_cdf, rtuomg_pdf
from rtuomg.errors import DomainError
from rtuomg.moments import (
    TABLE1_HEADER,
    TABLE1_ROWS,
    MomentSet,
    bonferroni,
    incomplete_moment,
    incomplete_moment_numeric,
    inverted_moment,
    lorenz,
    mgf,
    moment_numeric,
    moment_set,
    raw_moment,
    table1,
    table1_csv,
)
from rtuomg.specfun import adaptive_quad

REFERENCE = Path(__file__).parent / "data" / "moment_grid_reference.csv"


def reference_rows():
    with open(REFERENCE) as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def mp_moment(r, a, b, p):
    """Extended-precision E[X^r] by tanh-sinh quadrature."""
    mp.mp.dps = 30

    def f(x):
        y = x**b
        lw = -a * (mp.log1p(y) - mp.log1p(-y))
        return x**r * 2 * a * b * x ** (b - 1) / (1 - y * y) * mp.exp(lw) * (1 - p - p * lw)

    return float(mp.quad(f, [0, 0.5, 0.9, 1]))


# --- raw moments -------------------------------------------------------------


def test_raw_moment_reference_values():
    assert raw_moment(1, RtuomgParams(0.5, 0.7, 0.2)) == pytest.approx(0.5542510, abs=5e-6)
    assert raw_moment(4, RtuomgParams(1.5, 5.0, 0.5)) == pytest.approx(0.4610186, abs=5e-6)


@pytest.mark.parametrize("a,b", [(0.5, 0.7), (2.0, 1.3), (6.0, 0.4)])
def test_raw_moment_p_zero_matches_uomg_quadrature(a, b):
    m = Uomg(a, b)
    for r in (1, 2, 3):
        q = adaptive_quad(lambda x: x**r * m.pdf(x), 0.0, 1.0, tol=1e-12)
        assert raw_moment(r, RtuomgParams(a, b, 0.0)) == pytest.approx(q, abs=1e-8)


@pytest.mark.parametrize("a,b,p", [(1.0, 1.0, 0.5), (2.5, 0.6, 0.9), (1.5, 3.0, 1.0), (4.0, 2.0, 0.0)])
def test_raw_moment_extended_precision(a, b, p):
    for r in (1, 2, 4):
        assert raw_moment(r, RtuomgParams(a, b, p)) == pytest.approx(mp_moment(r, a, b, p), rel=1e-11)


def test_raw_moment_small_alpha():
    # slow k^(-alpha-1) decay of the record series
    for a in (0.1, 0.2, 0.3):
        prm = RtuomgParams(a, 0.8, 0.9)
        assert raw_moment(1, prm) == pytest.approx(moment_numeric(1, prm), abs=1e-9)


@given(st.floats(0.2, 15.0), st.floats(0.2, 8.0), st.floats(0.0, 1.0), st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_raw_moment_series_vs_quadrature(a, b, p, r):
    prm = RtuomgParams(a, b, p)
    assert raw_moment(r, prm) == pytest.approx(moment_numeric(r, prm), abs=1e-7)


def test_raw_moment_domain():
    with pytest.raises(DomainError):
        raw_moment(-1, RtuomgParams(1, 1, 0.5))


# --- quadrature oracle -------------------------------------------------------


def test_moment_numeric_normalization():
    for prm in (RtuomgParams(0.5, 1.4, 0.7), RtuomgParams(3.0, 0.3, 1.0)):
        assert moment_numeric(0, prm) == pytest.approx(1.0, abs=1e-9)


def test_moment_numeric_monotone_in_order():
    prm = RtuomgParams(0.9, 1.1, 0.4)
    m = [moment_numeric(r, prm) for r in range(0, 8)]
    assert all(b <= a for a, b in zip(m, m[1:]))


# --- moment summary and reference grid ---------------------------------------


def test_moment_set_first_row():
    ms = moment_set(RtuomgParams(0.5, 0.7, 0.2))
    assert ms.mu2 == pytest.approx(0.1213154, abs=5e-6)
    assert ms.cs == pytest.approx(-0.1787491, abs=1e-5)
    assert ms.ck == pytest.approx(1.5419750, abs=5e-5)


def test_moment_set_p_half_row():
    prm = RtuomgParams(0.5, 0.3, 0.5)
    ms = moment_set(prm)
    assert ms.mu1p == pytest.approx(0.4997255, abs=5e-6)
    # skewness against the quadrature oracle; the tabulated value differs by about 1e-5
    oracle = MomentSet.from_raw(*(moment_numeric(r, prm) for r in range(1, 5)))
    assert ms.cs == pytest.approx(oracle.cs, abs=1e-9)
    assert ms.cs == pytest.approx(-0.0177101, abs=2e-5)


def test_moment_set_variance_identity():
    prm = RtuomgParams(2.0, 1.5, 0.3)
    ms = moment_set(prm)
    m1, m2 = moment_numeric(1, prm), moment_numeric(2, prm)
    assert ms.mu2 == pytest.approx(m2 - m1 * m1, abs=1e-7)


def test_moment_set_from_raw_is_consistent():
    ms = MomentSet.from_raw(0.5, 0.3, 0.2, 0.15)
    assert ms.mu2 == pytest.approx(0.05)
    assert ms.cs == pytest.approx((0.2 - 3 * 0.3 * 0.5 + 2 * 0.125) / 0.05**1.5)
    assert ms.ck == pytest.approx((0.15 - 4 * 0.5 * 0.2 + 6 * 0.25 * 0.3 - 3 * 0.0625) / 0.0025)


@given(st.floats(0.2, 10.0), st.floats(0.2, 8.0), st.floats(0.0, 1.0))
@settings(max_examples=40, deadline=None)
def test_moment_set_invariants(a, b, p):
    ms = moment_set(RtuomgParams(a, b, p))
    assert ms.mu2 >= 0
    assert 1 > ms.mu1p >= ms.mu2p >= ms.mu3p >= ms.mu4p > 0


def test_grid_raw_moments_and_variance_match_reference():
    ref = reference_rows()
    assert len(ref) == len(TABLE1_ROWS) == 27
    for (prm, ms), row in zip(table1(), ref):
        assert (prm.alpha, prm.beta, prm.p) == (row["alpha"], row["beta"], row["p"])
        for key in ("mu1p", "mu2p", "mu3p", "mu4p", "var"):
            got = ms.mu2 if key == "var" else getattr(ms, key)
            assert got == pytest.approx(row[key], abs=5e-6), (prm, key)


def test_grid_series_vs_quadrature():
    for prm, ms in table1():
        for r, v in enumerate((ms.mu1p, ms.mu2p, ms.mu3p, ms.mu4p), start=1):
            assert v == pytest.approx(moment_numeric(r, prm), abs=1e-7)


def test_grid_csv_deterministic_and_consistent():
    text = table1_csv()
    assert text == table1_csv()
    rows = list(csv.reader(text.splitlines()))
    assert tuple(rows[0]) == TABLE1_HEADER
    assert len(rows) == 28
    for row in rows[1:]:
        v = [float(t) for t in row]
        ms = MomentSet.from_raw(*v[3:7])
        assert ms.mu2 == pytest.approx(v[7], rel=1e-8)
        assert ms.cs == pytest.approx(v[8], rel=1e-7, abs=1e-9)
        assert ms.ck == pytest.approx(v[9], rel=1e-6)


# --- incomplete moments ------------------------------------------------------


def test_incomplete_moment_quadrature_oracle():
    prm = RtuomgParams(0.5, 1.4, 0.7)
    q = adaptive_quad(lambda x: x * rtuomg_pdf(x, prm), 0.0, 0.5, tol=1e-13)
    assert incomplete_moment(1, 0.5, prm) == pytest.approx(q, abs=1e-8)


@given(st.floats(0.2, 10.0), st.floats(0.2, 6.0), st.floats(0.0, 1.0), st.floats(0.01, 0.99), st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_incomplete_moment_against_quadrature(a, b, p, z, r):
    prm = RtuomgParams(a, b, p)
    assert incomplete_moment(r, z, prm) == pytest.approx(incomplete_moment_numeric(r, z, prm), abs=1e-7)


def test_incomplete_moment_full_range_limit():
    for prm in (RtuomgParams(2.0, 1.0, 0.5), RtuomgParams(1.0, 0.6, 0.9)):
        for r in (1, 2):
            assert incomplete_moment(r, 1 - 1e-8, prm) == pytest.approx(raw_moment(r, prm), abs=1e-6)


def test_incomplete_moment_small_alpha_tail_mass():
    # for small alpha much of the mass sits within 1e-8 of the upper end
    prm = RtuomgParams(0.5, 1.0, 0.5)
    z = 1 - 1e-8
    gap = raw_moment(1, prm) - incomplete_moment(1, z, prm)
    # the gap is E[X; X > z], squeezed between z S(z) and S(z)
    S = 1 - rtuomg_cdf(z, prm)
    assert S > 1e-4
    assert z * S - 1e-12 <= gap <= S + 1e-12


def test_incomplete_moment_monotone():
    prm = RtuomgParams(1.2, 0.9, 0.6)
    zs = np.linspace(0.02, 0.98, 20)
    vals = [incomplete_moment(2, z, prm) for z in zs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("z", [0.0, 1.0, -0.1])
def test_incomplete_moment_domain(z):
    with pytest.raises(DomainError):
        incomplete_moment(1, z, RtuomgParams(1, 1, 0.5))


# --- inverted moments --------------------------------------------------------


def test_inverted_moment_quadrature_oracle():
    prm = RtuomgParams(0.5, 1.4, 0.7)
    q = moment_numeric(-1, prm)
    assert inverted_moment(1, prm) == pytest.approx(q, abs=1e-6)


def test_inverted_moment_p_zero():
    prm = RtuomgParams(2.0, 3.0, 0.0)
    m = Uomg(2.0, 3.0)
    for r in (1, 2):
        q = adaptive_quad(lambda x: x**-r * m.pdf(x), 0.0, 1.0, tol=1e-11)
        assert inverted_moment(r, prm) == pytest.approx(q, abs=1e-6)


@pytest.mark.parametrize("r", [1.4, 2.0])
def test_inverted_moment_divergent(r):
    with pytest.raises(DomainError, match="diverges"):
        inverted_moment(r, RtuomgParams(0.5, 1.4, 0.7))


# --- mgf ---------------------------------------------------------------------


def test_mgf_at_zero():
    assert mgf(0.0, RtuomgParams(0.5, 0.7, 0.2)).value == 1.0


def test_mgf_quadrature_oracle():
    prm = RtuomgParams(0.5, 0.7, 0.2)
    res = mgf(1.0, prm, terms=20)
    q = adaptive_quad(lambda x: math.exp(x) * rtuomg_pdf(x, prm), 0.0, 0.5, tol=1e-13)
    # upper piece: E[e^X; X > 1/2] = e^{1/2} S(1/2) + int_{1/2}^1 e^x S(x) dx
    S = lambda x: 1.0 - rtuomg_cdf(x, prm)
    q += math.exp(0.5) * S(0.5) + adaptive_quad(lambda x: math.exp(x) * S(x), 0.5, 1.0, tol=1e-13)
    assert abs(res.value - q) <= max(1e-7, res.remainder_bound)


@given(st.floats(-5.0, 5.0))
@settings(max_examples=20, deadline=None)
def test_mgf_doubling_within_bound(t):
    prm = RtuomgParams(1.3, 0.9, 0.4)
    a = mgf(t, prm, terms=12)
    b = mgf(t, prm, terms=24)
    assert abs(a.value - b.value) <= a.remainder_bound + 1e-12


def test_mgf_convexity_bound():
    prm = RtuomgParams(1.3, 0.9, 0.4)
    m1 = raw_moment(1, prm)
    for t in (0.1, 1.0, 3.0):
        assert mgf(t, prm).value >= 1 + t * m1


def test_mgf_domain():
    with pytest.raises(DomainError):
        mgf(1.0, RtuomgParams(1, 1, 0.5), terms=0)


# --- Lorenz and Bonferroni ---------------------------------------------------


def test_lorenz_limits_and_oracle():
    prm = RtuomgParams(0.5, 1.4, 0.7)
    assert lorenz(1e-9, prm) == pytest.approx(0.0, abs=1e-9)
    assert lorenz(1 - 1e-12, prm) == pytest.approx(1.0, abs=1e-4)
    q = adaptive_quad(lambda x: x * rtuomg_pdf(x, prm), 0.0, 0.5, tol=1e-13) / moment_numeric(1, prm)
    assert lorenz(0.5, prm) == pytest.approx(q, abs=1e-7)


def test_lorenz_shape():
    prm = RtuomgParams(2.0, 1.5, 0.6)
    zs = np.linspace(0.02, 0.98, 50)
    L = np.array([lorenz(z, prm) for z in zs])
    F = rtuomg_cdf(zs, prm)
    assert np.all(np.diff(L) >= 0)
    assert np.all(L <= F + 1e-12)
    # convex as a function of the population share F
    slopes = np.diff(L) / np.diff(F)
    assert np.all(np.diff(slopes) >= -1e-9)


def test_bonferroni():
    prm = RtuomgParams(2.0, 1.5, 0.6)
    z = 0.3
    phi1 = adaptive_quad(lambda x: x * rtuomg_pdf(x, prm), 0.0, z, tol=1e-13)
    expected = phi1 / moment_numeric(1, prm) / rtuomg_cdf(z, prm)
    assert bonferroni(z, prm) == pytest.approx(expected, rel=1e-8)
    assert bonferroni(1 - 1e-12, prm) == pytest.approx(1.0, abs=1e-6)
    zs = np.linspace(0.02, 0.98, 25)
    assert all(0 <= bonferroni(z, prm) <= 1 for z in zs)
