"""Loss series and benchmark-relative forecast gains.

A :class:`ReturnSeries` holds ``benchmark_loss - model_loss`` per period, so a
positive value is a period in which the model beat the benchmark.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AlignmentError,
    IncompatibleRuleError,
    UnsupportedRuleError,
    ValidationError,
)


class ScoringRule(str, Enum):
    SQUARED_ERROR = "squared_error"
    ABSOLUTE_ERROR = "absolute_error"
    EXTERNAL = "external"


_CHUNK = re.compile(r"(\d+)")


def label_sort_key(label: str) -> tuple:
    """Natural ordering key: digit runs compare numerically ("2007Q2" < "2007Q10")."""
    parts = _CHUNK.split(str(label))
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def check_period_labels(labels: Optional[Sequence], length: int) -> Optional[tuple]:
    if labels is None:
        return None
    labels = tuple(str(x) for x in labels)
    if len(labels) != length:
        raise AlignmentError(
            f"period_labels has {len(labels)} entries but there are {length} values"
        )
    keys = [label_sort_key(x) for x in labels]
    for i in range(1, len(keys)):
        if not keys[i - 1] < keys[i]:
            raise ValidationError(
                f"period labels must be strictly increasing: {labels[i - 1]!r} then {labels[i]!r}"
            )
    return labels


def _as_finite_vector(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValidationError(f"{what} is empty")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValidationError(f"{what} has a non-finite value at position {bad}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LossSeries:
    """Realized losses of one model under one scoring rule (lower is better)."""

    model_id: str
    scoring_rule: ScoringRule
    values: np.ndarray
    period_labels: Optional[tuple] = None

    def __post_init__(self):
        rule = ScoringRule(self.scoring_rule)
        object.__setattr__(self, "scoring_rule", rule)
        values = _as_finite_vector(self.values, f"losses of {self.model_id!r}")
        if rule is not ScoringRule.EXTERNAL and np.any(values < 0):
            raise ValidationError(f"{rule.value} losses of {self.model_id!r} must be >= 0")
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "period_labels", check_period_labels(self.period_labels, values.size)
        )

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class ReturnSeries:
    """Per-period forecast gain of ``model_id`` over ``benchmark_id``."""

    model_id: str
    benchmark_id: str
    scoring_rule: ScoringRule
    values: np.ndarray
    period_labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "scoring_rule", ScoringRule(self.scoring_rule))
        if self.model_id == self.benchmark_id:
            raise ValidationError("model_id and benchmark_id must differ")
        values = _as_finite_vector(self.values, "return series")
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "period_labels", check_period_labels(self.period_labels, values.size)
        )

    def __len__(self):
        return self.values.size

    @classmethod
    def from_values(cls, values, model_id="model", benchmark_id="benchmark",
                    scoring_rule=ScoringRule.EXTERNAL, period_labels=None):
        return cls(model_id, benchmark_id, scoring_rule, values, period_labels)


def compute_losses(actuals, forecasts, rule=ScoringRule.SQUARED_ERROR, model_id="model",
                   period_labels=None) -> LossSeries:
    """Squared or absolute forecast errors, period by period.

    External scores (log scores, CRPS, ...) cannot be computed here; build a
    ``LossSeries`` with ``scoring_rule="external"`` directly instead.
    """
    rule = ScoringRule(rule)
    if rule is ScoringRule.EXTERNAL:
        raise UnsupportedRuleError(
            "external losses are supplied as data, not computed from forecasts"
        )
    y = _as_finite_vector(actuals, "actuals")
    f = _as_finite_vector(forecasts, "forecasts")
    if y.size != f.size:
        raise AlignmentError(f"{y.size} actuals but {f.size} forecasts")
    err = y - f
    values = err * err if rule is ScoringRule.SQUARED_ERROR else np.abs(err)
    return LossSeries(model_id, rule, values, period_labels)


def return_series(benchmark: LossSeries, model: LossSeries) -> ReturnSeries:
    if benchmark.scoring_rule is not model.scoring_rule:
        raise IncompatibleRuleError(
            f"benchmark scored by {benchmark.scoring_rule.value}, "
            f"model by {model.scoring_rule.value}"
        )
    if len(benchmark) != len(model):
        raise AlignmentError(
            f"benchmark has {len(benchmark)} periods, model {model.model_id!r} has {len(model)}"
        )
    labels = benchmark.period_labels
    if labels is not None and model.period_labels is not None:
        if labels != model.period_labels:
            raise AlignmentError("benchmark and model period labels differ")
    elif labels is None:
        labels = model.period_labels
    return ReturnSeries(
        model.model_id,
        benchmark.model_id,
        benchmark.scoring_rule,
        benchmark.values - model.values,
        labels,
    )


def mean_return(r: ReturnSeries) -> float:
    return float(np.mean(r.values))
