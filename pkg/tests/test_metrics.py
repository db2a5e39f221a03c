import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from forecast_risk import (
    ReturnSeries,
    drawdown,
    omega_ratio,
    risk_report,
    sharpe_ratio,
    sortino_ratio,
)
from forecast_risk.errors import InsufficientDataError
from forecast_risk.metrics import downside_deviation, volatility

gains = st.lists(st.floats(-100, 100, allow_nan=False).map(lambda x: round(x, 6)),
                 min_size=2, max_size=60)


def test_sharpe_examples():
    assert sharpe_ratio([2, -1, 2, 1]) == pytest.approx(0.70711, abs=1e-5)
    assert sharpe_ratio([1, -1]) == 0
    assert sharpe_ratio([0.3, 0.3, 0.3]) == math.inf
    assert sharpe_ratio([-2.0, -2.0]) == -math.inf
    assert math.isnan(sharpe_ratio([0, 0, 0]))
    with pytest.raises(InsufficientDataError):
        sharpe_ratio([1.0])


def test_sharpe_population_convention():
    # population variance of [2, -1, 2, 1] is 6/4
    assert sharpe_ratio([2, -1, 2, 1], "population_T") == pytest.approx(1 / math.sqrt(1.5))


def test_sortino_examples():
    assert sortino_ratio([2, -1, 2, 1]) == pytest.approx(2.0)
    assert sortino_ratio([1, 0, 3]) == math.inf
    assert sortino_ratio([-1, -1]) == pytest.approx(-1.0)
    assert math.isnan(sortino_ratio([0, 0]))
    # divisor T counts the winning periods too
    assert downside_deviation([2, -1, 2, 1]) == pytest.approx(0.5)


def test_omega_examples():
    assert omega_ratio([2, -1, 2, 1]) == pytest.approx(5.0)
    assert omega_ratio([1, -1]) == 1.0
    assert omega_ratio([0, 0, 0]) == 1.0
    assert omega_ratio([1, 0]) == math.inf
    assert omega_ratio([-1, 0]) == 0.0


@pytest.mark.parametrize(
    "r, path, mdd",
    [
        ([1, -2, 1, -1], [0, 2, 1, 2], 2),
        ([1, 1, 1], [0, 0, 0], 0),
        ([-3], [3], 3),
        ([2, -1, 2, 1], [0, 1, 0, 0], 1),
    ],
)
def test_drawdown_examples(r, path, mdd):
    p, m = drawdown(r)
    assert p.tolist() == path
    assert m == mdd
    assert oracles.brute_max_drawdown(r) == mdd


def test_risk_report_examples():
    rep = risk_report(ReturnSeries.from_values([2, -1, 2, 1]))
    assert rep.mean_return == 1
    assert rep.sharpe == pytest.approx(0.70711, abs=1e-5)
    assert rep.sortino == pytest.approx(2.0)
    assert rep.omega == pytest.approx(5.0)
    assert rep.max_drawdown == 1
    assert rep.max_drawdown == rep.drawdown_path.max()
    assert rep.omega == pytest.approx(rep.upside_mean / rep.downside_mean)

    zero = risk_report([0, 0, 0])
    assert math.isnan(zero.sharpe) and math.isnan(zero.sortino)
    assert zero.omega == 1 and zero.max_drawdown == 0

    sym = risk_report([1, -1])
    assert (sym.mean_return, sym.sharpe, sym.omega, sym.max_drawdown) == (0, 0, 1, 1)

    with pytest.raises(InsufficientDataError):
        risk_report([1.0])


def test_volatility_exact_zero_for_constants():
    assert volatility([0.1] * 7) == 0.0


@given(gains)
def test_matches_loop_oracles(xs):
    x = np.array(xs)
    assume(np.ptp(x) > 1e-9)
    assert sharpe_ratio(x) == pytest.approx(oracles.sharpe(xs), rel=1e-10)
    if np.any(x < 0):
        assert sortino_ratio(x) == pytest.approx(oracles.sortino(xs), rel=1e-10, abs=1e-12)
        assert omega_ratio(x) == pytest.approx(oracles.omega(xs), rel=1e-10)
    assert drawdown(x)[1] == pytest.approx(oracles.brute_max_drawdown(xs), abs=1e-9)
    np.testing.assert_allclose(drawdown(x)[0], oracles.brute_drawdown_path(xs), atol=1e-9)


@given(gains, st.floats(0.01, 100))
def test_scale_equivariance(xs, c):
    x = np.array(xs)
    assume(np.ptp(x) > 1e-6 and np.any(x < -1e-6) and np.any(x > 1e-6))
    assert sharpe_ratio(c * x) == pytest.approx(sharpe_ratio(x), rel=1e-9)
    assert sortino_ratio(c * x) == pytest.approx(sortino_ratio(x), rel=1e-9, abs=1e-12)
    assert omega_ratio(c * x) == pytest.approx(omega_ratio(x), rel=1e-9)
    assert drawdown(c * x)[1] == pytest.approx(c * drawdown(x)[1], rel=1e-9, abs=1e-9)


@given(gains)
def test_omega_sign_flip_and_mean_equivalence(xs):
    x = np.array(xs)
    om = omega_ratio(x)
    if 0 < om < math.inf:
        assert omega_ratio(-x) == pytest.approx(1 / om, rel=1e-12)
    up = np.maximum(x, 0).sum()
    down = np.maximum(-x, 0).sum()
    assume(abs(up - down) > 1e-6 * max(1.0, up + down))
    assert (om > 1) == (up > down) == (x.mean() > 0)


@given(gains)
def test_sortino_dominates_population_sharpe(xs):
    x = np.array(xs)
    assume(x.mean() > 1e-9 and np.ptp(x) > 0)
    assert sortino_ratio(x) >= sharpe_ratio(x, "population_T") * (1 - 1e-12)


@settings(max_examples=200)
@given(gains, st.floats(1e-3, 100))
def test_positive_append_never_worsens_drawdown(xs, extra):
    path, mdd = drawdown(xs)
    path2, mdd2 = drawdown(xs + [extra])
    assert mdd2 <= mdd + 1e-12 or mdd2 == pytest.approx(mdd)
    np.testing.assert_array_equal(path2[:-1], path)
    assert path2[-1] <= path[-1]
