"""Edge Ratio: performance against a moving frontier of competing models.

At each period the frontier is the smallest loss among all *other* models in
the pool. The edge is ``frontier - own loss``; its positive part counts as a
win, its negative part as a regret. The ratio of total wins to total regrets,
multiplied by ``pool_size - 1``, is the Edge Ratio.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import AlignmentError, PoolTooSmallError, ValidationError
from .losses import LossSeries, check_period_labels, label_sort_key
from .metrics import UNDEFINED

ModelRef = Union[int, str]


@dataclass(frozen=True)
class LossPanel:
    """``T x K`` losses, one column per model, lower is better."""

    model_ids: tuple
    losses: np.ndarray
    benchmark_index: Optional[int] = None
    period_labels: Optional[tuple] = None

    def __post_init__(self):
        ids = tuple(str(m) for m in self.model_ids)
        if len(set(ids)) != len(ids):
            raise ValidationError(f"model ids must be unique, got {list(ids)}")
        losses = np.array(self.losses, dtype=float)
        if losses.ndim != 2:
            raise ValidationError("losses must be a T x K matrix")
        if losses.shape[1] != len(ids):
            raise AlignmentError(f"{losses.shape[1]} loss columns but {len(ids)} model ids")
        if len(ids) < 2:
            raise PoolTooSmallError(f"a loss panel needs at least 2 models, got {len(ids)}")
        if losses.shape[0] < 1:
            raise ValidationError("a loss panel needs at least one period")
        if not np.all(np.isfinite(losses)):
            t, k = np.argwhere(~np.isfinite(losses))[0]
            raise ValidationError(f"non-finite loss for {ids[k]!r} at period index {t}")
        if self.benchmark_index is not None and not 0 <= self.benchmark_index < len(ids):
            raise ValidationError(f"benchmark_index {self.benchmark_index} out of range")
        losses.setflags(write=False)
        object.__setattr__(self, "model_ids", ids)
        object.__setattr__(self, "losses", losses)
        object.__setattr__(
            self, "period_labels", check_period_labels(self.period_labels, losses.shape[0])
        )

    @property
    def n_periods(self) -> int:
        return self.losses.shape[0]

    @property
    def pool_size(self) -> int:
        return self.losses.shape[1]

    @property
    def benchmark_id(self) -> Optional[str]:
        if self.benchmark_index is None:
            return None
        return self.model_ids[self.benchmark_index]

    def index(self, model: ModelRef) -> int:
        if isinstance(model, (int, np.integer)) and not isinstance(model, bool):
            if not 0 <= model < self.pool_size:
                raise ValidationError(f"model index {model} out of range for {self.pool_size} models")
            return int(model)
        try:
            return self.model_ids.index(str(model))
        except ValueError:
            raise ValidationError(f"model {model!r} not in pool {list(self.model_ids)}") from None

    def series(self, model: ModelRef, scoring_rule="external") -> LossSeries:
        j = self.index(model)
        return LossSeries(self.model_ids[j], scoring_rule, self.losses[:, j], self.period_labels)

    def window(self, start: Optional[str] = None, end: Optional[str] = None) -> "LossPanel":
        """Rows whose period label lies in ``[start, end]`` (inclusive)."""
        if start is None and end is None:
            return self
        rows = window_rows(self.period_labels, self.n_periods, start, end)
        labels = None if self.period_labels is None else tuple(self.period_labels[i] for i in rows)
        return LossPanel(self.model_ids, self.losses[rows], self.benchmark_index, labels)

    def pool_hash(self) -> str:
        return pool_hash(self.model_ids)


def window_rows(labels, n, start=None, end=None) -> np.ndarray:
    if labels is None:
        raise ValidationError("a window needs period labels")
    for name, bound in (("window start", start), ("window end", end)):
        if bound is not None and str(bound) not in labels:
            raise ValidationError(f"{name} {bound!r} is not a period label of the panel")
    lo = labels.index(str(start)) if start is not None else 0
    hi = labels.index(str(end)) if end is not None else n - 1
    if lo > hi:
        raise ValidationError(f"window start {start!r} comes after window end {end!r}")
    return np.arange(lo, hi + 1)


def pool_hash(model_ids: Sequence[str]) -> str:
    """Short digest of the (sorted) pool membership, to tag edge ratios."""
    joined = "\x1f".join(sorted((str(m) for m in model_ids), key=label_sort_key))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class EdgeSeries:
    model_id: str
    edges: np.ndarray
    wins: np.ndarray
    regrets: np.ndarray
    pool_size: int

    @property
    def total_wins(self) -> float:
        return float(self.wins.sum())

    @property
    def total_regrets(self) -> float:
        return float(self.regrets.sum())


def frontier(panel: LossPanel, exclude: ModelRef) -> np.ndarray:
    """Per-period minimum loss over every column except ``exclude``."""
    if panel.pool_size < 2:
        raise PoolTooSmallError("frontier needs at least one competing model")
    j = panel.index(exclude)
    others = np.delete(panel.losses, j, axis=1)
    return others.min(axis=1)


def edge_series(panel: LossPanel, model: ModelRef) -> EdgeSeries:
    j = panel.index(model)
    edges = frontier(panel, j) - panel.losses[:, j]
    return EdgeSeries(
        model_id=panel.model_ids[j],
        edges=edges,
        wins=np.maximum(edges, 0.0),
        regrets=np.maximum(-edges, 0.0),
        pool_size=panel.pool_size,
    )


def scaled_edge(total_wins: float, total_regrets: float, pool_size: int) -> float:
    if pool_size < 2:
        raise PoolTooSmallError(f"edge ratio needs a pool of at least 2, got {pool_size}")
    if total_wins == 0:
        # never strictly on the frontier: exactly zero, even with zero regret
        return 0.0 if total_regrets > 0 else UNDEFINED
    if total_regrets == 0:
        return math.inf
    return total_wins / total_regrets * (pool_size - 1)


def edge_ratio(panel: LossPanel, model: ModelRef) -> float:
    """Edge Ratio of one model; the pool size counts the model itself.

    Returns 0.0 when the model never strictly beats the frontier, ``inf`` when it
    never falls behind it, and NaN when it always ties.
    """
    es = edge_series(panel, model)
    return scaled_edge(es.total_wins, es.total_regrets, es.pool_size)


def edge_ratios(panel: LossPanel) -> dict:
    return {m: edge_ratio(panel, j) for j, m in enumerate(panel.model_ids)}


def frontier_wins(panel: LossPanel) -> np.ndarray:
    """``T x K`` boolean matrix: True where a model is the strict unique per-period minimum."""
    L = panel.losses
    out = np.zeros(L.shape, dtype=bool)
    for j in range(panel.pool_size):
        out[:, j] = frontier(panel, j) > L[:, j]
    return out


def win_frequencies(panel: LossPanel) -> np.ndarray:
    return frontier_wins(panel).mean(axis=0)
