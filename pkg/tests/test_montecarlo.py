import math

import numpy as np
import pytest
import scipy.stats

from wordshape import _rng
from wordshape.montecarlo import (
    ExperimentConfig,
    TailEstimate,
    concentration_check,
    estimate_eigen_tail,
    estimate_row_tail,
    identity_ks_test,
    ks_null_quantile,
    ks_statistic,
    ldp_slope_experiment,
)
from wordshape.rate_functions import rate_I_r
from wordshape.wordmodel import AlphabetDistribution


def test_tail_estimate_validation():
    with pytest.raises(ValueError):
        TailEstimate(p_hat=1.5, stderr=0.0, reps=10, speed=4.0, rate_estimate=1.0)
    with pytest.raises(ValueError):
        TailEstimate(p_hat=0.5, stderr=0.0, reps=10, speed=4.0,
                     rate_estimate=math.inf)
    with pytest.raises(ValueError):
        TailEstimate(p_hat=0.0, stderr=0.0, reps=10, speed=4.0, rate_estimate=1.0)


def test_tail_estimate_from_hits():
    est = TailEstimate.from_hits(0, 200, 4.0)
    assert est.zero_hits and math.isinf(est.rate_estimate) and est.stderr == 0.0
    est = TailEstimate.from_hits(50, 200, 4.0)
    assert est.p_hat == 0.25
    assert est.rate_estimate == pytest.approx(-math.log(0.25) / 4.0)
    assert est.stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 200))


def test_config_validation():
    ok = dict(model="uniform", n=100, sizes=(4,), thresholds=(1.0,),
              side="upper", reps=10, seed=1)
    ExperimentConfig(**ok)
    with pytest.raises(ValueError):
        ExperimentConfig(**{**ok, "side": "both"})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**ok, "reps": 0})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**ok, "speed": "n"})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**ok, "thresholds": (math.nan,)})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**ok, "thresholds": ((1.0, math.inf),)})


def test_speed_token_defaults():
    base = dict(model="uniform", n=100, sizes=(4,), thresholds=(1.0,),
                reps=10, seed=1)
    assert ExperimentConfig(side="upper", **base).speed_token() == "m"
    assert ExperimentConfig(side="lower", **base).speed_token() == "m2"
    dist = AlphabetDistribution(np.array([0.4, 0.3, 0.3]))
    assert ExperimentConfig(side="upper", **{**base, "model": dist}).speed_token() == "k"
    assert ExperimentConfig(side="lower", **{**base, "model": dist}).speed_token() == "k2"
    assert ExperimentConfig(side="lower", speed="m",
                            **base).speed_token() == "m"


def test_row_tail_rejects_traceless():
    cfg = ExperimentConfig(model="traceless", n=0, sizes=(4,), thresholds=(1.5,),
                           side="lower", reps=10, seed=1)
    with pytest.raises(ValueError):
        estimate_row_tail(cfg)


def test_shared_samples_monotone_upper_tail():
    cfg = ExperimentConfig(model="uniform", n=2000, sizes=(4,),
                           thresholds=(1.4, 1.8, 2.2, 2.6), side="upper",
                           reps=1500, seed=11)
    points = estimate_row_tail(cfg)
    assert len(points) == 4
    ps = [pt.estimate.p_hat for pt in points]
    assert ps == sorted(ps, reverse=True)
    assert ps[0] > ps[-1]


def test_worker_count_does_not_change_estimates():
    base = dict(model="uniform", n=1000, sizes=(4, 6), thresholds=(1.6, 2.0),
                side="upper", reps=600, seed=5)
    one = estimate_row_tail(ExperimentConfig(workers=1, **base))
    many = estimate_row_tail(ExperimentConfig(workers=8, **base))
    assert [p.estimate for p in one] == [p.estimate for p in many]


def test_joint_event_never_exceeds_marginal():
    cfg = ExperimentConfig(model="uniform", n=2000, sizes=(4,),
                           thresholds=(1.2, (1.2, 0.2)), side="upper",
                           reps=1200, seed=3)
    points = {pt.threshold: pt.estimate for pt in estimate_row_tail(cfg)}
    assert points[(1.2, 0.2)].p_hat <= points[1.2].p_hat
    assert points[1.2].p_hat > 0.0


def test_joint_event_guards():
    cfg = ExperimentConfig(model="uniform", n=500, sizes=(4,),
                           thresholds=((1.0, 0.5),), side="lower",
                           reps=50, seed=3)
    with pytest.raises(ValueError):
        estimate_row_tail(cfg)


def test_nonuniform_hypothesis_warnings():
    dist = AlphabetDistribution(np.array([0.4, 0.4, 0.2]))
    cfg = ExperimentConfig(model=dist, n=100, sizes=(), thresholds=(0.5,),
                           side="upper", reps=50, seed=2)
    with pytest.warns(UserWarning):
        estimate_row_tail(cfg)


def test_eigen_tail_extremes():
    est = estimate_eigen_tail(5, -10.0, "lower", 200, 7)
    assert est.zero_hits and math.isinf(est.rate_estimate)
    est = estimate_eigen_tail(5, 0.0, "upper", 200, 7)
    assert est.p_hat == 1.0 and est.rate_estimate == 0.0
    with pytest.raises(ValueError):
        estimate_eigen_tail(5, 0.0, "sideways", 200, 7)


def test_ks_statistic_matches_scipy():
    rng = _rng.generator(21)
    a = rng.standard_normal(137)
    b = rng.standard_normal(211) + 0.3
    ref = scipy.stats.ks_2samp(a, b, method="asymp").statistic
    assert ks_statistic(a, b) == pytest.approx(ref, abs=1e-12)


def test_ks_null_quantile_formula():
    val = ks_null_quantile(1e-3, 400, 900)
    expect = math.sqrt(-0.5 * math.log(5e-4)) * math.sqrt((400 + 900) / (400 * 900))
    assert val == pytest.approx(expect)


def test_identity_null_case_passes():
    res = identity_ks_test({"kind": "gaussian"}, {"kind": "gaussian"},
                           reps=5000, seed=17)
    assert res.passed and res.statistic < res.threshold


def test_identity_rejects_mismatched_dimensions():
    res = identity_ks_test({"kind": "gue_top", "m": 5},
                           {"kind": "gue_top", "m": 6}, reps=2000, seed=17)
    assert not res.passed


def test_identity_needs_enough_reps():
    with pytest.raises(ValueError):
        identity_ks_test({"kind": "gaussian"}, {"kind": "gaussian"},
                         reps=50, seed=1)
    with pytest.raises(ValueError):
        identity_ks_test({"kind": "gaussian"}, {"kind": "gaussian"},
                         reps=500, seed=1, reps_b=50)


def test_identity_unknown_kind():
    with pytest.raises(ValueError):
        identity_ks_test({"kind": "cauchy"}, {"kind": "gaussian"},
                         reps=500, seed=1)


def test_concentration_single_letter_degenerates_gracefully():
    report = concentration_check("uniform", ((1000, 1),), (0.1, 0.2, 0.3),
                                 reps=50, seed=9)
    assert len(report.rows) == 6
    assert not report.passed
    assert "upper" in report.insufficient
    uppers = [r for r in report.rows if r.side == "upper"]
    assert all(r.p_hat == 0.0 for r in uppers)


def test_concentration_fit_positive_rates():
    report = concentration_check("uniform", ((20000, 4), (20000, 6)),
                                 (0.05, 0.1, 0.15), reps=4000, seed=13)
    assert not report.insufficient
    assert report.fits["upper"].c_hat > 0.0
    assert report.fits["lower"].c_hat > 0.0


def test_slope_table_empty_grid():
    cfg = ExperimentConfig(model="uniform", n=1000, sizes=(4,), thresholds=(),
                           side="upper", reps=100, seed=1)
    table = ldp_slope_experiment(cfg)
    lines = table.to_csv().splitlines()
    assert lines[0] == "# wordshape ldp-slope schema 1"
    assert lines[1].startswith("model,n,size,x,side,speed,")
    assert len(lines) == 2


def test_slope_table_single_point_composes():
    cfg = ExperimentConfig(model="uniform", n=2000, sizes=(4,),
                           thresholds=(2.2,), side="upper", reps=800, seed=23)
    table = ldp_slope_experiment(cfg)
    assert len(table.rows) == 1
    row = table.rows[0]
    assert row.estimate == estimate_row_tail(cfg)[0].estimate
    assert row.rate_value == pytest.approx(float(rate_I_r([2.2])))
    assert row.model == "uniform" and row.side == "upper"
    lines = table.to_csv().splitlines()
    assert len(lines) == 3
    assert len(lines[2].split(",")) == 12


def test_slope_table_traceless_rows():
    cfg = ExperimentConfig(model="traceless", n=0, sizes=(4,),
                           thresholds=(1.5,), side="lower", reps=400, seed=29)
    table = ldp_slope_experiment(cfg)
    row = table.rows[0]
    assert row.model == "traceless" and row.n == 0 and row.size == 4
    assert row.estimate.speed == 16.0


def test_zero_hit_row_has_nan_ratio():
    cfg = ExperimentConfig(model="uniform", n=500, sizes=(4,),
                           thresholds=(40.0,), side="upper", reps=100, seed=2)
    table = ldp_slope_experiment(cfg)
    assert table.rows[0].estimate.zero_hits
    assert math.isnan(table.rows[0].ratio)
    assert table.to_csv().splitlines()[2].endswith(",inf,")  is False
    assert table.to_csv().splitlines()[2].split(",")[-1] == "nan"


def test_stderr_calibration_against_reference():
    # the 99.99 percent normal interval around each cheap estimate should
    # cover a 10x-reps reference estimate in at least 99 of 100 trials
    ref = estimate_row_tail(ExperimentConfig(
        model="uniform", n=2000, sizes=(4,), thresholds=(1.8,), side="upper",
        reps=4000, seed=1000))[0].estimate
    z = 3.891
    covered = 0
    for trial in range(100):
        est = estimate_row_tail(ExperimentConfig(
            model="uniform", n=2000, sizes=(4,), thresholds=(1.8,),
            side="upper", reps=400, seed=_rng.stream_seed(9, trial)))[0].estimate
        if abs(est.p_hat - ref.p_hat) <= z * max(est.stderr, 1e-12):
            covered += 1
    assert covered >= 99
