import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from mobxii.exceptions import DomainError, ParameterError
from mobxii.inference import edge_parameters, fit_mle
from mobxii.montecarlo import (
    IID_NAMES,
    REGRESSION_NAMES,
    StudyConfig,
    calibrate_censoring,
    censoring_rates,
    run_iid_study,
    run_regression_study,
    simulate_regression_sample,
    summarize,
)
from mobxii.family import MOBXII
from mobxii.numerics import RandomStream
from mobxii.regression import lmobxiiw_ppf_z

ZETA = (1.8, 0.5, 0.9, 1.5, 2.2)
THETA = (0.8, 2.5, 0.5, 3.5)


def test_summarize_exact():
    s = summarize(np.tile([1.0, 2.0], (5, 1)), [1.0, 2.0])
    assert np.all(s["Bias"] == 0) and np.all(s["MSE"] == 0)


def test_summarize_two_replicates():
    truth = np.array([0.5, 3.0])
    s = summarize(np.vstack([truth + 1, truth - 1]), truth)
    assert np.allclose(s["AE"], truth) and np.allclose(s["Bias"], 0) and np.allclose(s["MSE"], 1)


def test_summarize_validation():
    with pytest.raises(DomainError):
        summarize(np.ones((3, 2)), [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        summarize(np.empty((0, 2)), [1.0, 2.0])


@settings(max_examples=50)
@given(hnp.arrays(float, st.tuples(st.integers(1, 30), st.integers(1, 5)),
                  elements=st.floats(-100, 100)))
def test_property_mse_decomposition(est):
    truth = np.linspace(-1, 1, est.shape[1])
    s = summarize(est, truth)
    R = est.shape[0]
    var = est.var(axis=0, ddof=1) * (R - 1) / R if R > 1 else np.zeros(est.shape[1])
    assert np.allclose(s["MSE"], s["Bias"] ** 2 + var, rtol=1e-9, atol=1e-9)
    assert np.all(s["MSE"] >= s["Bias"] ** 2 - 1e-9 * (1 + s["MSE"]))


@pytest.mark.parametrize("kw", [
    dict(replications=0), dict(sample_sizes=()), dict(sample_sizes=(0,)),
    dict(censoring_targets=(1.0,)), dict(censoring_targets=(-0.1,)),
    dict(pilot_draws=10), dict(n_jobs=0), dict(random_starts=-1),
])
def test_config_validation(kw):
    with pytest.raises(ParameterError):
        StudyConfig(THETA, **kw)


def test_invalid_truth():
    with pytest.raises(ParameterError):
        run_iid_study(StudyConfig((-0.8, 2.5, 0.5, 3.5), replications=1, sample_sizes=(50,)))
    with pytest.raises(ParameterError):
        run_regression_study(StudyConfig((1.8, 0.5, 0.0, 1.5, 2.2), replications=1, sample_sizes=(50,)))


def test_single_replicate_equals_fit():
    cfg = StudyConfig(THETA, replications=1, sample_sizes=(60,), seed=3)
    study = run_iid_study(cfg)
    cell = study.cell(60)
    stream = RandomStream(3, 1, 60, 0)
    x = MOBXII.weibull(*THETA).rvs(60, stream)
    fit = fit_mle("MOBXIIW", x, starts=[np.array(THETA)], rng=stream.spawn(1), n_random=0,
                  with_se=False, with_gof=False, default_start=False)
    assert np.array_equal(cell.ae, fit.theta)
    assert np.array_equal(cell.bias, cell.ae - np.array(THETA))
    assert study.parameter_names == IID_NAMES


def test_iid_study_deterministic_and_shape():
    cfg = StudyConfig(THETA, replications=6, sample_sizes=(40, 80), seed=11)
    a, b = run_iid_study(cfg), run_iid_study(cfg)
    assert a.to_csv() == b.to_csv()
    assert [c.n for c in a.cells] == [40, 80]
    for c in a.cells:
        assert np.all(c.mse >= c.bias**2 - 1e-12)
        assert c.failures + (c.replications - c.failures) == 6


def test_cell_independent_of_study_layout():
    one = run_iid_study(StudyConfig(THETA, replications=4, sample_sizes=(80,), seed=2))
    two = run_iid_study(StudyConfig(THETA, replications=4, sample_sizes=(40, 80), seed=2))
    assert np.array_equal(one.cell(80).estimates, two.cell(80).estimates)


def test_first_replicates_unchanged_by_more_reps():
    short = run_iid_study(StudyConfig(THETA, replications=3, sample_sizes=(50,), seed=7))
    long = run_iid_study(StudyConfig(THETA, replications=6, sample_sizes=(50,), seed=7))
    assert np.array_equal(short.cell(50).estimates, long.cell(50).estimates[:3])


def test_parallel_matches_serial():
    cfg = StudyConfig(THETA, replications=4, sample_sizes=(50,), seed=5)
    par = StudyConfig(THETA, replications=4, sample_sizes=(50,), seed=5, n_jobs=2)
    assert run_iid_study(cfg).to_csv() == run_iid_study(par).to_csv()


def test_csv_layout():
    study = run_iid_study(StudyConfig(THETA, replications=2, sample_sizes=(50,), seed=1))
    rows = list(csv.DictReader(io.StringIO(study.to_csv())))
    assert list(rows[0]) == ["n", "censoring", "parameter", "AE", "Bias", "MSE", "failures"]
    assert [r["parameter"] for r in rows] == list(IID_NAMES)
    for r, ae in zip(rows, study.cells[0].ae):
        assert float(r["AE"]) == ae
    text = study.format_table()
    assert "n = 50" in text and "alpha" in text


def test_zero_censoring_path():
    stream = RandomStream(1)
    assert calibrate_censoring(ZETA, 0.0, stream) == math.inf
    s = simulate_regression_sample(ZETA, 50, math.inf, RandomStream(2))
    assert np.all(s.delta == 1) and s.p == 2


def test_calibration_hits_target_on_pilot():
    for target in (0.1, 0.3):
        b = calibrate_censoring(ZETA, target, RandomStream(3, 1), draws=20000)
        pilot = RandomStream(3, 1)
        v = pilot.uniform(20000)
        logt = ZETA[3] + ZETA[4] * v + ZETA[2] * lmobxiiw_ppf_z(ZETA[0], ZETA[1], pilot.uniform(20000))
        frac = float(np.mean(np.minimum(np.exp(logt) / b, 1.0)))
        assert abs(frac - target) < 0.005


def test_calibration_validation():
    with pytest.raises(ParameterError):
        calibrate_censoring(ZETA, 1.0, RandomStream(1))


def test_realized_censoring_near_target():
    for target in (0.1, 0.3):
        b = calibrate_censoring(ZETA, target, RandomStream(4, target > 0.2))
        frac = np.mean([1 - simulate_regression_sample(ZETA, 100, b, RandomStream(5, rep)).delta.mean()
                        for rep in range(200)])
        assert abs(frac - target) <= 0.03


def test_regression_study_small():
    cfg = StudyConfig(ZETA, replications=3, sample_sizes=(100,), censoring_targets=(0.0, 0.3), seed=4)
    study = run_regression_study(cfg)
    assert study.parameter_names == REGRESSION_NAMES
    assert [c.censoring for c in study.cells] == [0.0, 0.3]
    assert study.cell(100, 0.0).realized_censoring == 0.0
    assert 0.1 < study.cell(100, 0.3).realized_censoring < 0.5
    assert study.to_csv() == run_regression_study(cfg).to_csv()
    assert "target censoring 30%" in study.format_table()


def test_failure_flagging():
    # every fit is rejected: fewer failures than the five the model needs
    cfg = StudyConfig(ZETA, replications=2, sample_sizes=(4,), censoring_targets=(0.0,), seed=1)
    study = run_regression_study(cfg)
    cell = study.cells[0]
    assert cell.failures == 2 and cell.flagged and study.flagged
    assert np.all(np.isnan(cell.ae))


def test_censoring_rates_match_study_cells():
    cfg = StudyConfig(ZETA, replications=3, sample_sizes=(60,), censoring_targets=(0.3,), seed=8)
    rates = censoring_rates(cfg, 60, 0.3)
    assert rates.shape == (3,)
    assert run_regression_study(cfg).cell(60, 0.3).realized_censoring == pytest.approx(rates.mean(), abs=1e-15)
    assert np.all(censoring_rates(cfg, 60, 0.0) == 0.0)


def test_edge_fits_count_as_failures():
    cfg = StudyConfig(THETA, replications=12, sample_sizes=(50,), seed=2)
    cell = run_iid_study(cfg).cell(50)
    edge = np.array([bool(edge_parameters(IID_NAMES, e)) for e in cell.estimates])
    assert edge.any()
    assert not np.any(cell.succeeded & edge)
    assert cell.failures == int((~cell.succeeded).sum())
    assert np.allclose(cell.ae, cell.estimates[cell.succeeded].mean(axis=0), rtol=0, atol=1e-15)
