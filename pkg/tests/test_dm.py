import logging
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from forecast_risk import (
    HacConfig,
    autocorr1,
    autocovariance,
    dm_statistic,
    dm_test,
    hac_variance,
    long_run_variance,
    sharpe_ratio,
)
from forecast_risk.dm import rule_of_thumb_lag
from forecast_risk.errors import ConfigError, LagRangeError

ALT = [1, -1, 1, -1]
series = st.lists(st.floats(-50, 50, allow_nan=False).map(lambda v: round(v, 6)),
                  min_size=3, max_size=80)


def test_autocovariance_examples():
    assert autocovariance(ALT, 0) == 1.0
    assert autocovariance(ALT, 1) == -0.75
    assert autocovariance([2.5] * 5, 3) == 0
    with pytest.raises(LagRangeError):
        autocovariance(ALT, 4)
    with pytest.raises(LagRangeError):
        autocovariance(ALT, -1)


@given(series, st.integers(0, 10))
def test_autocovariance_matches_loop(xs, k):
    assume(k < len(xs))
    assert autocovariance(xs, k) == pytest.approx(oracles.autocov(xs, k), rel=1e-9, abs=1e-9)


def test_autocorr1_examples():
    assert autocorr1(ALT) == -0.75
    assert autocorr1([1, 2, 3, 4, 5, 6]) > 0
    assert autocorr1([1, 2, 3, 4, 5, 6]) == pytest.approx(
        oracles.autocov([1, 2, 3, 4, 5, 6], 1) / oracles.autocov([1, 2, 3, 4, 5, 6], 0))
    assert math.isnan(autocorr1([4, 4, 4]))


def test_autocorr1_iid_near_zero():
    rng = np.random.default_rng(11)
    assert abs(autocorr1(rng.standard_normal(100_000))) < 0.02


def test_long_run_variance_examples():
    x = [0.3, -1.2, 2.0, 0.7, 0.1]
    for kernel in ("bartlett", "truncated_uniform"):
        assert long_run_variance(x, HacConfig.fixed(0, kernel)) == autocovariance(x, 0)
    lrv = hac_variance(ALT, HacConfig.fixed(1, "truncated_uniform"))
    assert lrv.raw_value == -0.5
    assert lrv.floored and lrv.value == pytest.approx(1e-12)
    assert long_run_variance(ALT, HacConfig.fixed(1, "bartlett")) == 0.25


def test_hac_config_lag_rules():
    assert HacConfig().resolve_lag(1000) == rule_of_thumb_lag(1000) == 15
    assert HacConfig.default_for(horizon=4).resolve_lag(50) == 3
    assert HacConfig.fixed(2).resolve_lag(3) == 2
    with pytest.raises(LagRangeError):
        HacConfig.fixed(3).resolve_lag(3)
    with pytest.raises(ConfigError):
        HacConfig(lag_rule="fixed")
    with pytest.raises(ConfigError):
        HacConfig(lag_rule="horizon_minus_one")
    assert HacConfig().resolve_lag(2) == 1


def test_dm_examples():
    assert dm_statistic([2, -1, 2, 1], HacConfig.fixed(0)) == pytest.approx(1.63299, abs=1e-5)
    assert dm_statistic([1, -1] * 10, HacConfig.fixed(0)) == 0
    assert dm_statistic([1, -1] * 10, HacConfig.fixed(3)) == 0
    assert math.isnan(dm_statistic([3.0, 3.0, 3.0], HacConfig.fixed(1)))


@given(series)
def test_dm_sharpe_identity(xs):
    x = np.array(xs)
    assume(np.ptp(x) > 1e-6)
    dm = dm_statistic(x, HacConfig.fixed(0))
    assert dm == pytest.approx(math.sqrt(x.size) * sharpe_ratio(x, "population_T"), rel=1e-12, abs=1e-14)


@given(series, st.floats(0.1, 10), st.sampled_from([-1.0, 1.0]), st.integers(0, 2))
def test_dm_location_scale(xs, c, sign, lag):
    x = np.array(xs)
    assume(np.ptp(x) > 1e-3)
    cfg = HacConfig.fixed(lag)
    a = dm_statistic(sign * c * x, cfg)
    b = dm_statistic(x, cfg)
    assert a == pytest.approx(sign * b, rel=1e-9, abs=1e-9)


def test_positive_persistence_shrinks_dm():
    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(200):
        x = 0.3 + np.cumsum(rng.standard_normal(40)) * 0.2 + rng.standard_normal(40)
        K = 3
        if all(autocovariance(x, k) > 0 for k in range(1, K + 1)):
            checked += 1
            for kernel in ("bartlett", "truncated_uniform"):
                assert abs(dm_statistic(x, HacConfig.fixed(K, kernel))) < abs(dm_statistic(x, HacConfig.fixed(0)))
    assert checked > 20


def test_bartlett_floor_never_triggers(caplog):
    rng = np.random.default_rng(9)
    caplog.set_level(logging.WARNING, logger="forecast_risk.dm")
    for _ in range(500):
        T = int(rng.integers(8, 120))
        x = rng.standard_normal(T) * rng.uniform(0.1, 10)
        for K in range(0, T // 4 + 1):
            assert not dm_test(x, HacConfig.fixed(K)).lrv.floored
    assert not caplog.records
