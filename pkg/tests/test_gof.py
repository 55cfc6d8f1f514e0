import json
import math

import numpy as np
import pytest
from scipy import stats

from rtuomg.datasets import load_builtin
from rtuomg.distributions import Rtuomg, make_model
from rtuomg.errors import DomainError
from rtuomg.estimation import FitOptions, fit
from rtuomg.gof import (
    ad_p_value,
    ad_statistic,
    aic,
    bootstrap_p_values,
    cvm_p_value,
    cvm_statistic,
    gof_report,
    ks_p_value,
    ks_statistic,
    selection_csv,
    selection_json,
    selection_table,
)

BLADDER = np.sort(load_builtin("bladder").array())
FAILURE = np.sort(load_builtin("failure").array())


def identity(x):
    return np.asarray(x, dtype=float)


# --- published statistics at the published estimates ------------------------

# (model, params, -2logL, KS, KS p, CvM, CvM p, AD, AD p)
BLADDER_ROWS = [
    ("rtuomg", (7.08299, 1.11156, 0.01), -365.0942, 0.0655, 0.6468, 0.1077, 0.5492, 0.6613, 0.5917),
    ("uw", (0.03608, 2.84277), -358.6090, 0.0679, 0.6011, 0.1546, 0.3764, 1.0428, 0.3354),
]
FAILURE_ROWS = [
    ("rtuomg", (4.84868, 0.687588, 0.526608), -159.8693, 0.1003, 0.6960, 0.0638, 0.7920, 0.3342, 0.9100),
    ("uw", (0.05624, 2.12460), -154.2329, 0.1483, 0.2214, 0.1817, 0.3064, 0.9602, 0.3784),
]


@pytest.mark.parametrize("data,row", [(BLADDER, r) for r in BLADDER_ROWS] + [(FAILURE, r) for r in FAILURE_ROWS])
def test_published_selection_rows(data, row):
    name, params, m2, ks, ks_p, cv, cv_p, ad, ad_p = row
    rep = gof_report(data, make_model(name, params))
    assert rep.neg2loglik == pytest.approx(m2, abs=0.01)
    assert rep.aic == pytest.approx(m2 + 2 * len(params), abs=0.01)
    assert rep.ks[0] == pytest.approx(ks, abs=5e-4)
    assert rep.cvm[0] == pytest.approx(cv, abs=1e-3)
    assert rep.ad[0] == pytest.approx(ad, abs=5e-3)
    assert rep.ks[1] == pytest.approx(ks_p, abs=0.03)
    assert rep.cvm[1] == pytest.approx(cv_p, abs=0.03)
    assert rep.ad[1] == pytest.approx(ad_p, abs=0.03)


def test_aic_examples():
    assert aic(-365.0942, 3) == pytest.approx(-359.0942, abs=1e-12)
    assert aic(-159.8693, 3) == pytest.approx(-153.8693, abs=1e-12)
    assert aic(12.5, 0) == 12.5


# --- statistics --------------------------------------------------------------

def test_ks_matches_scipy(rng):
    x = rng.beta(2, 3, size=57)
    cdf = stats.beta(2.2, 3).cdf
    assert ks_statistic(np.sort(x), cdf) == pytest.approx(stats.kstest(x, cdf).statistic, abs=1e-15)


def test_cvm_matches_scipy(rng):
    x = rng.beta(2, 3, size=41)
    cdf = stats.beta(2.2, 3).cdf
    ref = stats.cramervonmises(x, cdf)
    assert cvm_statistic(np.sort(x), cdf) == pytest.approx(ref.statistic, rel=1e-13)


def test_ad_hand_formula(rng):
    x = np.sort(rng.uniform(size=9))
    n = x.size
    s = sum((2 * i - 1) * (math.log(x[i - 1]) + math.log(1 - x[n - i])) for i in range(1, n + 1))
    assert ad_statistic(x, identity) == pytest.approx(-n - s / n, rel=1e-13)


@pytest.mark.parametrize("n", [1, 7, 50])
def test_plotting_position_floors(n):
    u = (np.arange(1, n + 1) - 0.5) / n
    assert ks_statistic(u, identity) == pytest.approx(1 / (2 * n), rel=1e-12)
    assert cvm_statistic(u, identity) == pytest.approx(1 / (12 * n), rel=1e-12)


def test_statistics_respect_floors(rng):
    for n in (3, 20, 100):
        x = np.sort(rng.uniform(size=n))
        assert ks_statistic(x, identity) >= 1 / (2 * n) - 1e-15
        assert cvm_statistic(x, identity) >= 1 / (12 * n) - 1e-15


def test_ks_probability_integral_invariance():
    model = Rtuomg(4.84868, 0.687588, 0.526608)
    d1 = ks_statistic(FAILURE, model.cdf)
    d2 = ks_statistic(np.sort(model.cdf(FAILURE)), identity)
    # strictly increasing transform applied to both data and cdf
    d3 = ks_statistic(np.sqrt(FAILURE), lambda y: model.cdf(np.asarray(y) ** 2))
    assert d1 == pytest.approx(d2, abs=1e-15)
    assert d1 == pytest.approx(d3, abs=1e-14)


def test_statistics_sort_their_input(rng):
    x = rng.uniform(size=20)
    assert ks_statistic(x, identity) == ks_statistic(np.sort(x), identity)
    assert ad_statistic(x, identity) == ad_statistic(np.sort(x), identity)


def test_ad_finite_with_cdf_at_bounds():
    assert math.isfinite(ad_statistic([0.2, 0.5, 0.9], lambda x: np.array([0.0, 0.5, 1.0])))


# --- p-values ----------------------------------------------------------------

def test_ks_p_value_endpoints():
    assert ks_p_value(0.0, 10) == 1.0
    assert ks_p_value(0.9, 100) < 1e-10


def test_ks_p_value_matches_kolmogorov_limit():
    for d, n in [(0.0655, 127), (0.1003, 50), (0.2, 30), (0.05, 1000)]:
        assert ks_p_value(d, n) == pytest.approx(stats.kstwobign.sf(math.sqrt(n) * d), abs=1e-11)


def test_bladder_ks_p_value():
    assert ks_p_value(0.0655, 127) == pytest.approx(0.6468, abs=0.03)


@pytest.mark.parametrize("n", [10, 50, 300])
def test_cvm_p_value_matches_scipy(rng, n):
    for _ in range(5):
        x = rng.beta(2, 2, size=n)
        ref = stats.cramervonmises(x, stats.beta(2.3, 2).cdf)
        assert cvm_p_value(ref.statistic, n) == pytest.approx(ref.pvalue, abs=1e-6)


def test_ad_p_value_critical_points():
    # asymptotic 5% and 1% points of A^2 under a fully specified null
    assert ad_p_value(2.492, 10 ** 7) == pytest.approx(0.05, abs=5e-4)
    assert ad_p_value(3.878, 10 ** 7) == pytest.approx(0.01, abs=2e-4)


@pytest.mark.parametrize("fn,grid", [
    (ks_p_value, np.linspace(0.0, 0.5, 60)),
    (cvm_p_value, np.linspace(0.001, 2.0, 60)),
    (ad_p_value, np.linspace(0.01, 8.0, 60)),
])
def test_p_values_monotone_and_bounded(fn, grid):
    p = np.array([fn(s, 40) for s in grid])
    assert np.all((p >= 0) & (p <= 1))
    assert np.all(np.diff(p) <= 1e-12)


def test_p_values_reject_bad_input():
    with pytest.raises(DomainError):
        ks_p_value(1.5, 10)
    with pytest.raises(DomainError):
        cvm_p_value(0.1, 0)
    with pytest.raises(DomainError):
        ad_p_value(-1.0, 5)


def test_null_calibration():
    # p-values of uniform samples against the identity cdf are uniform
    rng = np.random.default_rng(2718)
    reps, n = 2000, 200
    ps = {"ks": [], "cvm": [], "ad": []}
    for _ in range(reps):
        x = np.sort(rng.uniform(size=n))
        ps["ks"].append(ks_p_value(ks_statistic(x, identity), n))
        ps["cvm"].append(cvm_p_value(cvm_statistic(x, identity), n))
        ps["ad"].append(ad_p_value(ad_statistic(x, identity), n))
    se_mean = math.sqrt(1 / 12 / reps)
    se_tail = math.sqrt(0.05 * 0.95 / reps)
    for name, p in ps.items():
        p = np.array(p)
        assert abs(p.mean() - 0.5) < 3 * se_mean + (0.01 if name == "ks" else 0), name
        tail = np.mean(p < 0.05)
        # the asymptotic KS law is slightly conservative at finite n
        lo = 0.05 - 3 * se_tail - (0.015 if name == "ks" else 0)
        assert lo < tail < 0.05 + 3 * se_tail, name


# --- selection table ---------------------------------------------------------

def _fitted(data, names=("rtuomg", "uomg", "cug", "cul", "uw")):
    return [fit(data, "ml", FitOptions(model=m, std_errors=False)).model for m in names]


def test_selection_table_sorted_and_identity():
    reports = selection_table(FAILURE, _fitted(FAILURE))
    aics = [r.aic for r in reports]
    assert aics == sorted(aics)
    assert sorted(r.model for r in reports) == ["CUG", "CUL", "RTUOMG", "UOMG", "UW"]
    for r in reports:
        assert r.aic == 2 * r.k + r.neg2loglik
        for stat, p in (r.ks, r.cvm, r.ad):
            assert 0 <= p <= 1


def test_selection_table_single_model():
    reports = selection_table(FAILURE, [Rtuomg(4.84868, 0.687588, 0.526608)])
    assert len(reports) == 1


def test_selection_csv_and_json():
    reports = selection_table(BLADDER, _fitted(BLADDER, ("uw", "rtuomg")))
    text = selection_csv(reports)
    lines = text.strip().split("\n")
    assert lines[0] == "model,neg2loglik,aic,ks,ks_p,cvm,cvm_p,ad,ad_p"
    assert len(lines) == 3
    doc = json.loads(selection_json(reports))
    assert [r["model"] for r in doc["reports"]] == [r.model for r in reports]
    assert doc["reports"][0]["aic"] == pytest.approx(reports[0].aic, rel=1e-15)


def test_bootstrap_deterministic_and_bounded():
    model = fit(FAILURE, "ml", FitOptions(model="uw", std_errors=False)).model

    def refit(s):
        return fit(s, "ml", FitOptions(model="uw", std_errors=False)).model

    a = bootstrap_p_values(FAILURE, model, refit, n_boot=9, seed=4)
    b = bootstrap_p_values(FAILURE, model, refit, n_boot=9, seed=4)
    assert a == b
    assert all(0.1 - 1e-12 <= p <= 1.0 for p in a)
