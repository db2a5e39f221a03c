"""Autocovariances, HAC long-run variance and the Diebold-Mariano statistic."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConfigError, InsufficientDataError, LagRangeError
from .metrics import UNDEFINED, as_returns

logger = logging.getLogger(__name__)

FLOOR_FRACTION = 1e-12


class Kernel(str, Enum):
    BARTLETT = "bartlett"
    TRUNCATED_UNIFORM = "truncated_uniform"


class LagRule(str, Enum):
    FIXED = "fixed"
    HORIZON_MINUS_ONE = "horizon_minus_one"
    RULE_OF_THUMB = "rule_of_thumb"


def rule_of_thumb_lag(n: int) -> int:
    return int(math.floor(1.5 * float(np.cbrt(n))))


@dataclass(frozen=True)
class HacConfig:
    """Kernel and truncation lag for the long-run variance.

    ``max_lag`` is only read under ``lag_rule="fixed"``; ``horizon`` only under
    ``"horizon_minus_one"``. :meth:`resolve_lag` turns the rule into a concrete
    lag for a series of length ``n``.
    """

    kernel: Kernel = Kernel.BARTLETT
    max_lag: Optional[int] = None
    lag_rule: LagRule = LagRule.RULE_OF_THUMB
    horizon: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kernel", Kernel(self.kernel))
        object.__setattr__(self, "lag_rule", LagRule(self.lag_rule))
        if self.lag_rule is LagRule.FIXED:
            if self.max_lag is None or int(self.max_lag) != self.max_lag or self.max_lag < 0:
                raise ConfigError(f"fixed lag rule needs a nonnegative integer max_lag, got {self.max_lag!r}")
        if self.lag_rule is LagRule.HORIZON_MINUS_ONE:
            if self.horizon is None or self.horizon < 1:
                raise ConfigError("horizon_minus_one lag rule needs a positive horizon")

    @classmethod
    def fixed(cls, max_lag: int, kernel=Kernel.BARTLETT) -> "HacConfig":
        return cls(kernel=kernel, max_lag=max_lag, lag_rule=LagRule.FIXED)

    @classmethod
    def default_for(cls, horizon: Optional[int] = None, kernel=Kernel.BARTLETT) -> "HacConfig":
        """``K = h - 1`` when a horizon is known, otherwise ``floor(1.5 T^(1/3))``."""
        if horizon is not None:
            return cls(kernel=kernel, lag_rule=LagRule.HORIZON_MINUS_ONE, horizon=horizon)
        return cls(kernel=kernel, lag_rule=LagRule.RULE_OF_THUMB)

    def resolve_lag(self, n: int) -> int:
        if self.lag_rule is LagRule.FIXED:
            lag = int(self.max_lag)
        elif self.lag_rule is LagRule.HORIZON_MINUS_ONE:
            lag = int(self.horizon) - 1
        else:
            lag = min(rule_of_thumb_lag(n), max(n - 1, 0))
        if lag >= n:
            raise LagRangeError(f"max_lag {lag} must be smaller than the series length {n}")
        return lag

    def describe(self, n: int) -> dict:
        return {"kernel": self.kernel.value, "lag_rule": self.lag_rule.value,
                "max_lag": self.resolve_lag(n)}


def _autocovariances(x: np.ndarray, max_lag: int) -> np.ndarray:
    n = x.size
    if max_lag < 0 or max_lag >= n:
        raise LagRangeError(f"lag {max_lag} outside 0 <= k < {n}")
    if np.ptp(x) == 0:
        return np.zeros(max_lag + 1)
    d = x - x.mean()
    return np.array([np.dot(d[k:], d[: n - k]) / n for k in range(max_lag + 1)])


def autocovariance(r, k: int) -> float:
    """Sample autocovariance at lag ``k`` with divisor ``T`` at every lag."""
    x = as_returns(r)
    if k < 0 or k >= x.size:
        raise LagRangeError(f"lag {k} outside 0 <= k < {x.size}")
    return float(_autocovariances(x, k)[k])


def autocorr1(e) -> float:
    """First-order autocorrelation ``gamma_1 / gamma_0``; undefined for constant input."""
    x = as_returns(e)
    if x.size < 2:
        raise InsufficientDataError("autocorrelation needs at least 2 observations")
    g = _autocovariances(x, 1)
    if g[0] == 0:
        return UNDEFINED
    return float(g[1] / g[0])


@dataclass(frozen=True)
class LongRunVariance:
    value: float
    raw_value: float
    gamma0: float
    max_lag: int
    kernel: Kernel
    floored: bool


def hac_variance(r, cfg: HacConfig) -> LongRunVariance:
    """Long-run variance with its diagnostics.

    Truncated-uniform weights reproduce ``gamma_0 + 2 * sum(gamma_k)`` as is;
    Bartlett weights ``1 - k/(K+1)`` keep the estimate nonnegative. A sum that
    still comes out <= 0 is floored at ``1e-12 * gamma_0`` and flagged.
    """
    x = as_returns(r)
    lag = cfg.resolve_lag(x.size)
    g = _autocovariances(x, lag)
    k = np.arange(1, lag + 1)
    if cfg.kernel is Kernel.BARTLETT:
        w = 1.0 - k / (lag + 1.0)
    else:
        w = np.ones(lag)
    raw = float(g[0] + 2.0 * np.dot(w, g[1:]))
    value, floored = raw, False
    if raw <= 0 and g[0] > 0:
        value, floored = FLOOR_FRACTION * float(g[0]), True
        if cfg.kernel is Kernel.BARTLETT:
            logger.warning("Bartlett long-run variance %.3g floored (T=%d, K=%d)", raw, x.size, lag)
    return LongRunVariance(value, raw, float(g[0]), lag, cfg.kernel, floored)


def long_run_variance(r, cfg: HacConfig) -> float:
    return hac_variance(r, cfg).value


@dataclass(frozen=True)
class DMResult:
    statistic: float
    mean: float
    lrv: LongRunVariance
    n: int


def dm_test(r, cfg: HacConfig) -> DMResult:
    x = as_returns(r)
    if x.size < 2:
        raise InsufficientDataError(f"DM statistic needs at least 2 observations, got {x.size}")
    lrv = hac_variance(x, cfg)
    mean = float(np.mean(x))
    if lrv.value <= 0:
        stat = UNDEFINED
    else:
        stat = mean / math.sqrt(lrv.value / x.size)
    return DMResult(stat, mean, lrv, int(x.size))


def dm_statistic(r, cfg: HacConfig) -> float:
    """``mean(r) / sqrt(LRV / T)``; NaN when the variance is degenerate."""
    return dm_test(r, cfg).statistic
