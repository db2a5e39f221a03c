"""Cross-sectional (meta) statistics over a target x horizon x design grid.

Each grid cell holds one scalar performance value per model (RMSE, MASE, a mean
log-score loss, ...), lower is better. A model's meta return in a cell is its
percentage improvement over the benchmark's value in that cell; the risk
metrics are then applied to the collection of cell returns.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .edge import LossPanel, scaled_edge, edge_series
from .errors import (
    BenchmarkAbsentError,
    DomainError,
    InsufficientDataError,
    NormalizationError,
    PoolConsistencyError,
    PoolTooSmallError,
    ValidationError,
)
from .losses import label_sort_key
from .metrics import (
    downside_deviation,
    omega_ratio,
    sharpe_ratio,
    sortino_ratio,
    volatility,
)


class Normalization(str, Enum):
    RATIO_PERCENT = "ratio_percent"
    RAW_DIFFERENCE = "raw_difference"


class CellKey(NamedTuple):
    target: str
    horizon: str
    design: str


class MetaCell(NamedTuple):
    target: str
    horizon: str
    design: str
    model: str
    value: float
    metric_name: str = "value"

    @property
    def cell(self) -> CellKey:
        return CellKey(self.target, self.horizon, self.design)


def _cell_order(key: CellKey):
    return tuple(label_sort_key(p) for p in key)


@dataclass(frozen=True)
class MetaGrid:
    cells: tuple
    benchmark_model: str

    def __post_init__(self):
        cells = tuple(
            MetaCell(str(c.target), str(c.horizon), str(c.design), str(c.model),
                     float(c.value), str(c.metric_name))
            for c in (c if isinstance(c, MetaCell) else MetaCell(*c) for c in self.cells)
        )
        seen = set()
        for c in cells:
            if not np.isfinite(c.value):
                raise ValidationError(f"non-finite value for {c.model!r} in cell {tuple(c.cell)}")
            key = (c.target, c.horizon, c.design, c.model, c.metric_name)
            if key in seen:
                raise ValidationError(f"duplicate grid entry {key}")
            seen.add(key)
        bench = str(self.benchmark_model)
        have_bench = {(c.metric_name, c.cell) for c in cells if c.model == bench}
        for c in cells:
            if (c.metric_name, c.cell) not in have_bench:
                raise BenchmarkAbsentError(
                    f"cell {tuple(c.cell)} ({c.metric_name}) has no {bench!r} benchmark value"
                )
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "benchmark_model", bench)

    def metric_names(self) -> list:
        return sorted({c.metric_name for c in self.cells}, key=label_sort_key)

    def _metric(self, metric_name: Optional[str]) -> str:
        names = self.metric_names()
        if metric_name is None:
            if len(names) != 1:
                raise ValidationError(f"grid holds several metrics {names}; pass metric_name")
            return names[0]
        if metric_name not in names:
            raise ValidationError(f"metric {metric_name!r} not in grid (have {names})")
        return metric_name

    def models(self, metric_name: Optional[str] = None) -> list:
        metric = self._metric(metric_name)
        return sorted({c.model for c in self.cells if c.metric_name == metric}, key=label_sort_key)

    def table(self, metric_name: Optional[str] = None) -> dict:
        """``{cell_key: {model: value}}`` for one metric, cells in natural order."""
        metric = self._metric(metric_name)
        out: dict = {}
        for c in self.cells:
            if c.metric_name == metric:
                out.setdefault(c.cell, {})[c.model] = c.value
        return {k: out[k] for k in sorted(out, key=_cell_order)}

    def loss_panel(self, metric_name: Optional[str] = None) -> LossPanel:
        """Cells stacked as periods; every cell must carry the same model pool."""
        table = self.table(metric_name)
        models = self.models(metric_name)
        for key, row in table.items():
            if set(row) != set(models):
                missing = sorted(set(models) - set(row))
                raise PoolConsistencyError(f"cell {tuple(key)} lacks models {missing}")
        if len(models) < 2:
            raise PoolTooSmallError(f"meta edge needs at least 2 models, grid has {models}")
        losses = np.array([[row[m] for m in models] for row in table.values()])
        return LossPanel(tuple(models), losses, models.index(self.benchmark_model))


@dataclass(frozen=True)
class MetaReturns:
    model: str
    returns: np.ndarray
    cell_keys: tuple
    normalization: Normalization = Normalization.RATIO_PERCENT

    def __post_init__(self):
        r = np.asarray(self.returns, dtype=float).reshape(-1)
        if not np.all(np.isfinite(r)):
            raise ValidationError("meta returns must be finite")
        if r.size != len(self.cell_keys):
            raise ValidationError("returns and cell_keys differ in length")
        object.__setattr__(self, "returns", r)
        object.__setattr__(self, "cell_keys", tuple(self.cell_keys))


def meta_returns(grid: MetaGrid, model: str,
                 normalization=Normalization.RATIO_PERCENT,
                 metric_name: Optional[str] = None) -> MetaReturns:
    """Per-cell return of ``model`` against the grid benchmark.

    ``ratio_percent`` gives ``100 * (P_bench - P_model) / P_bench`` and needs a
    strictly positive benchmark value in every cell; ``raw_difference`` gives
    ``P_bench - P_model`` and accepts any sign (log-score losses).
    """
    normalization = Normalization(normalization)
    table = grid.table(metric_name)
    if not any(model in row for row in table.values()):
        raise ValidationError(f"model {model!r} not in grid")
    keys, out = [], []
    for key, row in table.items():
        if model not in row:
            continue
        pb, pm = row[grid.benchmark_model], row[model]
        if normalization is Normalization.RATIO_PERCENT:
            if pb <= 0:
                raise NormalizationError(
                    f"benchmark value {pb!r} in cell {tuple(key)} is not positive; "
                    "percentage returns are undefined here, use raw_difference"
                )
            # scaling before subtracting keeps decimal inputs exact (1.0 vs 0.90 gives 10.0)
            out.append((100.0 * pb - 100.0 * pm) / pb)
        else:
            out.append(pb - pm)
        keys.append(key)
    return MetaReturns(model, np.array(out), tuple(keys), normalization)


@dataclass(frozen=True)
class MetaMetrics:
    mean: float
    vol: float
    downside_deviation: float
    sharpe: float
    sortino: float
    omega: float
    n: int


def meta_metrics(ret) -> MetaMetrics:
    """Sharpe/Sortino/Omega of the cross-sectional return distribution.

    Same formulas as the time-series metrics; there is no drawdown because the
    cells have no order.
    """
    r = ret.returns if isinstance(ret, MetaReturns) else np.asarray(ret, dtype=float)
    if r.size < 2:
        raise InsufficientDataError(f"meta metrics need at least 2 cells, got {r.size}")
    return MetaMetrics(
        mean=float(np.mean(r)),
        vol=volatility(r),
        downside_deviation=downside_deviation(r),
        sharpe=sharpe_ratio(r),
        sortino=sortino_ratio(r),
        omega=omega_ratio(r),
        n=int(r.size),
    )


def meta_edge(grid: MetaGrid, model: str, metric_name: Optional[str] = None) -> float:
    panel = grid.loss_panel(metric_name)
    es = edge_series(panel, model)
    return scaled_edge(es.total_wins, es.total_regrets, panel.pool_size)


def relative_ratio(model_metric: float, benchmark_metric: float) -> float:
    """``model / benchmark``, e.g. an RMSE ratio relative to the benchmark."""
    if not benchmark_metric > 0:
        raise DomainError(f"benchmark metric must be positive, got {benchmark_metric!r}")
    return float(model_metric) / float(benchmark_metric)
