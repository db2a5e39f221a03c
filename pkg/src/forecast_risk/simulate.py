"""Seeded Monte-Carlo checks for the Edge Ratio null and the DM persistence penalty.

Random numbers come from numpy's PCG64 bit generator. Each replication gets its
own generator seeded by ``SeedSequence([seed, stream, replication])``, so a
replication's draws depend only on those three integers and never on the order
in which replications run.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.signal import lfilter

from .dm import HacConfig, Kernel, LagRule, dm_statistic
from .edge import LossPanel, edge_ratio
from .errors import ConfigError

EDGE_STREAM = 1
DM_STREAM = 2


class LossLaw(str, Enum):
    GAUSSIAN_ABS = "gaussian_abs"
    EXPONENTIAL = "exponential"
    STUDENT_T_ABS = "student_t_abs"


@dataclass(frozen=True)
class SimConfig:
    pool_size: int = 10
    periods: int = 10_000
    replications: int = 200
    loss_law: LossLaw = LossLaw.EXPONENTIAL
    df: float = 5.0
    ar1_coefficient: float = 0.5
    drift: float = 0.05
    dominant_shift: float = 0.0
    seed: int = 20240101
    band: tuple = (0.8, 1.2)

    def __post_init__(self):
        try:
            object.__setattr__(self, "loss_law", LossLaw(self.loss_law))
        except ValueError:
            raise ConfigError(f"unknown loss_law {self.loss_law!r}") from None
        for name in ("pool_size", "periods", "replications", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.pool_size < 2:
            raise ConfigError(f"pool_size must be >= 2, got {self.pool_size}")
        if self.periods < 2:
            raise ConfigError(f"periods must be >= 2, got {self.periods}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.loss_law is LossLaw.STUDENT_T_ABS and not self.df > 2:
            raise ConfigError(f"student_t_abs needs df > 2, got {self.df}")
        if not -1 < self.ar1_coefficient < 1:
            raise ConfigError(f"ar1_coefficient must lie in (-1, 1), got {self.ar1_coefficient}")
        band = tuple(float(b) for b in self.band)
        if len(band) != 2 or not band[0] <= band[1]:
            raise ConfigError(f"band must be (low, high), got {self.band!r}")
        object.__setattr__(self, "band", band)

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown simulation settings {unknown}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "SimConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["loss_law"] = self.loss_law.value
        d["band"] = list(self.band)
        return d


def replication_rng(seed: int, stream: int, replication: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream, replication])))


def draw_losses(rng: np.random.Generator, cfg: SimConfig) -> np.ndarray:
    shape = (cfg.periods, cfg.pool_size)
    if cfg.loss_law is LossLaw.EXPONENTIAL:
        return rng.exponential(size=shape)
    if cfg.loss_law is LossLaw.GAUSSIAN_ABS:
        return np.abs(rng.standard_normal(shape))
    return np.abs(rng.standard_t(cfg.df, size=shape))


def _strict_winners(losses: np.ndarray) -> np.ndarray:
    low2 = np.partition(losses, 1, axis=1)[:, :2]
    unique = low2[:, 0] < low2[:, 1]
    winner = np.argmin(losses, axis=1)
    out = np.zeros(losses.shape, dtype=bool)
    rows = np.flatnonzero(unique)
    out[rows, winner[rows]] = True
    return out


@dataclass
class NullEdgeResult:
    mean_edge: float
    per_replication: np.ndarray
    win_counts: np.ndarray
    total_periods: int
    config: SimConfig = field(repr=False)

    @property
    def win_frequency(self) -> np.ndarray:
        return self.win_counts / self.total_periods

    @property
    def win_standard_error(self) -> float:
        p = 1.0 / self.config.pool_size
        return math.sqrt(p * (1 - p) / self.total_periods)

    @property
    def within_band(self) -> bool:
        lo, hi = self.config.band
        return bool(lo <= self.mean_edge <= hi)


def simulate_null_edge(cfg: SimConfig) -> NullEdgeResult:
    """Edge Ratio of model 0 across replications of an exchangeable pool.

    With ``dominant_shift > 0`` model 0's losses are lowered by that constant,
    which plants a genuine advantage.
    """
    ids = tuple(f"m{j}" for j in range(cfg.pool_size))
    per_rep = np.empty(cfg.replications)
    wins = np.zeros(cfg.pool_size, dtype=np.int64)
    for i in range(cfg.replications):
        L = draw_losses(replication_rng(cfg.seed, EDGE_STREAM, i), cfg)
        if cfg.dominant_shift:
            L[:, 0] -= cfg.dominant_shift
        per_rep[i] = edge_ratio(LossPanel(ids, L), 0)
        wins += _strict_winners(L).sum(axis=0)
    return NullEdgeResult(
        mean_edge=float(np.mean(per_rep)),
        per_replication=per_rep,
        win_counts=wins,
        total_periods=cfg.periods * cfg.replications,
        config=cfg,
    )


@dataclass
class DMPenaltyResult:
    dm_k0: np.ndarray
    dm_bartlett: np.ndarray
    bartlett_lag: int

    @property
    def mean_abs_k0(self) -> float:
        return float(np.mean(np.abs(self.dm_k0)))

    @property
    def mean_abs_bartlett(self) -> float:
        return float(np.mean(np.abs(self.dm_bartlett)))


def ar1_gains(rng: np.random.Generator, periods: int, phi: float, drift: float) -> np.ndarray:
    """``drift + u_t`` with stationary Gaussian AR(1) noise of unit variance."""
    eps = rng.standard_normal(periods)
    scale = math.sqrt(1.0 - phi * phi)
    u0 = rng.standard_normal()
    # stationary start: u_1 = phi * u_0 + scale * eps_1, with u_0 ~ N(0, 1)
    u = lfilter([scale], [1.0, -phi], eps, zi=[phi * u0])[0]
    return drift + u


def simulate_dm_penalty(cfg: SimConfig) -> DMPenaltyResult:
    """Paired DM statistics without (K=0) and with Bartlett HAC correction."""
    k0 = HacConfig.fixed(0, Kernel.TRUNCATED_UNIFORM)
    hac = HacConfig(kernel=Kernel.BARTLETT, lag_rule=LagRule.RULE_OF_THUMB)
    dm0 = np.empty(cfg.replications)
    dmb = np.empty(cfg.replications)
    for i in range(cfg.replications):
        r = ar1_gains(replication_rng(cfg.seed, DM_STREAM, i), cfg.periods,
                      cfg.ar1_coefficient, cfg.drift)
        dm0[i] = dm_statistic(r, k0)
        dmb[i] = dm_statistic(r, hac)
    return DMPenaltyResult(dm0, dmb, hac.resolve_lag(cfg.periods))
