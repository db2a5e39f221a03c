"""Risk-adjusted summaries of a forecast-gain series.

All functions accept either a :class:`~forecast_risk.losses.ReturnSeries` or a
plain sequence of gains, so the same code serves the time-series reports and the
cross-sectional meta statistics.

Zero-denominator policy
-----------------------
``0/0`` returns :data:`UNDEFINED` (a NaN); ``x/0`` with ``x != 0`` returns a
signed infinity. Omega is the exception: with no upside and no downside it is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InsufficientDataError, ValidationError
from .losses import ReturnSeries

UNDEFINED = float("nan")


class VarianceConvention(str, Enum):
    SAMPLE = "sample_Tminus1"
    POPULATION = "population_T"


def as_returns(r) -> np.ndarray:
    if isinstance(r, ReturnSeries):
        return r.values
    arr = np.asarray(r, dtype=float).reshape(-1)
    if arr.size == 0:
        raise InsufficientDataError("return series is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("return series contains non-finite values")
    return arr


def safe_ratio(num: float, den: float) -> float:
    if den == 0:
        if num == 0:
            return UNDEFINED
        return math.copysign(math.inf, num)
    return num / den


def volatility(r, variance_convention=VarianceConvention.SAMPLE) -> float:
    x = as_returns(r)
    convention = VarianceConvention(variance_convention)
    ddof = 1 if convention is VarianceConvention.SAMPLE else 0
    if x.size <= ddof:
        raise InsufficientDataError(f"need at least {ddof + 1} observations, got {x.size}")
    # constant input: report an exact zero instead of rounding noise
    if np.ptp(x) == 0:
        return 0.0
    return float(np.std(x, ddof=ddof))


def sharpe_ratio(r, variance_convention=VarianceConvention.SAMPLE) -> float:
    """Mean gain per unit of gain volatility.

    The default divides the sum of squared deviations by ``T - 1``. Use
    ``"population_T"`` to get the variant whose ``sqrt(T)`` multiple equals the
    Diebold-Mariano statistic with no autocovariance terms.
    """
    x = as_returns(r)
    if x.size < 2:
        raise InsufficientDataError(f"Sharpe ratio needs at least 2 observations, got {x.size}")
    return safe_ratio(float(np.mean(x)), volatility(x, variance_convention))


def downside_deviation(r) -> float:
    """Root mean square of ``min(r_t, 0)``; gains count as zeros in the divisor ``T``."""
    x = as_returns(r)
    neg = np.minimum(x, 0.0)
    return float(np.sqrt(np.mean(neg * neg)))


def sortino_ratio(r) -> float:
    x = as_returns(r)
    return safe_ratio(float(np.mean(x)), downside_deviation(x))


def upside_mean(r) -> float:
    return float(np.mean(np.maximum(as_returns(r), 0.0)))


def downside_mean(r) -> float:
    return float(np.mean(np.maximum(-as_returns(r), 0.0)))


def omega_ratio(r) -> float:
    x = as_returns(r)
    up = float(np.sum(np.maximum(x, 0.0)))
    down = float(np.sum(np.maximum(-x, 0.0)))
    if up == 0 and down == 0:
        return 1.0
    return safe_ratio(up, down)


def cumulative_gains(r) -> np.ndarray:
    """``R_t`` for ``t = 1..T`` (the implicit ``R_0 = 0`` is not included)."""
    return np.cumsum(as_returns(r))


def drawdown(r):
    """Drawdown path and maximum drawdown of additive cumulative gains.

    The running peak starts at ``R_0 = 0``, so a series that opens with a loss
    is already in drawdown at ``t = 1``.

    Returns
    -------
    path : np.ndarray
        ``DD_t = max(R_0..R_t) - R_t`` for ``t = 1..T``; all entries >= 0.
    max_drawdown : float
    """
    cum = cumulative_gains(r)
    peak = np.maximum.accumulate(np.maximum(cum, 0.0))
    path = peak - cum
    return path, float(path.max())


def max_drawdown(r) -> float:
    return drawdown(r)[1]


@dataclass(frozen=True)
class RiskReport:
    mean_return: float
    volatility: float
    downside_deviation: float
    sharpe: float
    sortino: float
    omega: float
    max_drawdown: float
    drawdown_path: np.ndarray
    upside_mean: float
    downside_mean: float
    n: int

    def as_dict(self) -> dict:
        return {
            "mean_return": self.mean_return,
            "volatility": self.volatility,
            "downside_deviation": self.downside_deviation,
            "sharpe": self.sharpe,
            "sortino": self.sortino,
            "omega": self.omega,
            "max_drawdown": self.max_drawdown,
            "upside_mean": self.upside_mean,
            "downside_mean": self.downside_mean,
            "n": self.n,
        }


def risk_report(r) -> RiskReport:
    x = as_returns(r)
    if x.size < 2:
        raise InsufficientDataError(f"risk report needs at least 2 observations, got {x.size}")
    path, mdd = drawdown(x)
    return RiskReport(
        mean_return=float(np.mean(x)),
        volatility=volatility(x),
        downside_deviation=downside_deviation(x),
        sharpe=sharpe_ratio(x),
        sortino=sortino_ratio(x),
        omega=omega_ratio(x),
        max_drawdown=mdd,
        drawdown_path=path,
        upside_mean=upside_mean(x),
        downside_mean=downside_mean(x),
        n=int(x.size),
    )
