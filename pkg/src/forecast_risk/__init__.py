"""Risk-adjusted evaluation of forecast loss differentials."""

from .dm import (
    DMResult,
    HacConfig,
    Kernel,
    LagRule,
    autocorr1,
    autocovariance,
    dm_statistic,
    dm_test,
    hac_variance,
    long_run_variance,
)
from .edge import EdgeSeries, LossPanel, edge_ratio, edge_ratios, edge_series, frontier, win_frequencies
from .errors import ValidationError
from .losses import LossSeries, ReturnSeries, ScoringRule, compute_losses, mean_return, return_series
from .meta import (
    MetaCell,
    MetaGrid,
    MetaReturns,
    Normalization,
    meta_edge,
    meta_metrics,
    meta_returns,
    relative_ratio,
)
from .metrics import (
    UNDEFINED,
    RiskReport,
    VarianceConvention,
    downside_deviation,
    drawdown,
    max_drawdown,
    omega_ratio,
    risk_report,
    sharpe_ratio,
    sortino_ratio,
)
from .panel_io import (
    DatasetManifest,
    load_forecasts,
    load_manifest,
    load_meta_grid,
    load_panel,
    read_report,
    write_report,
)
from .simulate import SimConfig, simulate_dm_penalty, simulate_null_edge

__version__ = "0.1.0"
