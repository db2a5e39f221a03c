"""Assemble evaluation, meta and simulation reports as plain nested dicts.

Numbers in a report are rounded to 6 significant digits when the report is
built, so that writing a report and reading it back gives an identical dict.
Drawdowns are stored negated, as printed in ranking tables.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .dm import HacConfig, autocorr1, dm_test
from .edge import LossPanel, edge_ratio
from .errors import PoolTooSmallError, ValidationError
from .losses import ScoringRule, label_sort_key, return_series
from .meta import MetaGrid, Normalization, meta_edge, meta_metrics, meta_returns, relative_ratio
from .metrics import (
    UNDEFINED,
    cumulative_gains,
    drawdown,
    omega_ratio,
    sharpe_ratio,
    sortino_ratio,
)
from .panel_io import ForecastTable
from .simulate import SimConfig, simulate_dm_penalty, simulate_null_edge

SIG_DIGITS = 6

RISK_ROWS = ("Return", "Sharpe", "Sortino", "Omega", "MaxDD", "Edge")
ACCURACY_ROWS = ("RMSE", "MAE", "rho(1)", "DM t-stat")
META_COLUMNS = ("Return", "Vol", "Sharpe", "Sortino", "Omega", "Edge")

# direction used to pick best / second-best entries of each row
HIGHER = "higher"
LOWER = "lower"
ABS_LOWER = "abs_lower"
ROW_DIRECTION = {
    "Return": HIGHER, "Sharpe": HIGHER, "Sortino": HIGHER, "Omega": HIGHER,
    "MaxDD": HIGHER,  # stored negative: least negative is best
    "Edge": HIGHER, "DM t-stat": HIGHER, "Vol": LOWER,
    "RMSE": LOWER, "MAE": LOWER, "Loss ratio": LOWER, "rho(1)": ABS_LOWER,
}

PANEL_FOR_RULE = {
    ScoringRule.SQUARED_ERROR: ("A", "Squared Error"),
    ScoringRule.ABSOLUTE_ERROR: ("B", "Absolute Error"),
    ScoringRule.EXTERNAL: ("A", "External Loss"),
}


def canon(value):
    """Round floats to 6 significant digits; NaN maps to the shared UNDEFINED object."""
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return UNDEFINED
        if math.isinf(value) or value == 0:
            return value + 0.0
        return float(f"{value:.{SIG_DIGITS}g}")
    if isinstance(value, dict):
        return {k: canon(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canon(v) for v in value]
    if isinstance(value, np.ndarray):
        return [canon(float(v)) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


def rank_best(values: dict, direction: str) -> dict:
    """Best and second-best keys of ``values`` (NaN entries never rank)."""
    items = [(k, v) for k, v in values.items() if isinstance(v, (int, float)) and not math.isnan(v)]
    if direction == HIGHER:
        keyf = lambda kv: -kv[1]
    elif direction == LOWER:
        keyf = lambda kv: kv[1]
    else:
        keyf = lambda kv: abs(kv[1])
    ordered = sorted(items, key=keyf)  # stable: ties keep model order
    return {
        "best": ordered[0][0] if ordered else None,
        "second": ordered[1][0] if len(ordered) > 1 else None,
    }


def _risk_rows(panel: LossPanel, bench: str, models: Sequence[str], rule) -> dict:
    rows = {name: {} for name in RISK_ROWS}
    b = panel.series(bench, rule)
    for m in models:
        r = return_series(b, panel.series(m, rule)) if m != bench else None
        x = r.values if r is not None else np.zeros(panel.n_periods)
        rows["Return"][m] = float(np.mean(x))
        rows["Sharpe"][m] = sharpe_ratio(x) if x.size >= 2 else UNDEFINED
        rows["Sortino"][m] = sortino_ratio(x)
        rows["Omega"][m] = omega_ratio(x)
        rows["MaxDD"][m] = -drawdown(x)[1]
        rows["Edge"][m] = edge_ratio(panel, m)
    return rows


def _select_models(all_models: Sequence[str], bench: str, models) -> list:
    if models is None or models == "all" or models == ["all"]:
        chosen = [m for m in all_models if m != bench]
        if not chosen:
            chosen = [bench]
    else:
        chosen = list(dict.fromkeys(models))
        unknown = [m for m in chosen if m not in all_models]
        if unknown:
            raise ValidationError(f"unknown models {unknown}; panel has {list(all_models)}")
    return sorted(chosen, key=label_sort_key)


def _best_block(panels: dict) -> dict:
    return {
        key: {row: rank_best(vals, ROW_DIRECTION.get(row, HIGHER)) for row, vals in p["rows"].items()}
        for key, p in panels.items()
    }


def evaluate_report(data, benchmark: Optional[str] = None, models=None,
                    hac: Optional[HacConfig] = None, rule=None, highlight: bool = True,
                    window: Optional[dict] = None) -> dict:
    """Panels A/B (risk metrics by loss) and C (classical accuracy) for each model.

    ``data`` is a :class:`ForecastTable` (both squared and absolute losses are
    derived, and rho(1) is measured on forecast errors) or a :class:`LossPanel`
    with its scoring ``rule`` (one risk panel; rho(1) measured on losses).
    The Edge pool is every column of the input, benchmark included.
    """
    if isinstance(data, ForecastTable):
        panels_in = {ScoringRule.SQUARED_ERROR: data.loss_panel(ScoringRule.SQUARED_ERROR),
                     ScoringRule.ABSOLUTE_ERROR: data.loss_panel(ScoringRule.ABSOLUTE_ERROR)}
        bench = benchmark or data.benchmark_id
        horizon = data.horizon
        labels = data.period_labels
        rho_source = "errors"
    else:
        rule = ScoringRule(rule or ScoringRule.EXTERNAL)
        panels_in = {rule: data}
        bench = benchmark or data.benchmark_id
        horizon = None
        labels = data.period_labels
        rho_source = "losses"
    if bench is None:
        raise ValidationError("no benchmark given")
    first = next(iter(panels_in.values()))
    if bench not in first.model_ids:
        raise ValidationError(f"benchmark {bench!r} not in panel {list(first.model_ids)}")
    chosen = _select_models(first.model_ids, bench, models)
    n = first.n_periods
    if n < 2:
        raise ValidationError(f"evaluation needs at least 2 periods, got {n}")
    hac = hac or HacConfig.default_for(horizon)

    panels = {}
    for rule_i, panel in panels_in.items():
        key, title = PANEL_FOR_RULE[rule_i]
        panels[key] = {"title": title, "scoring_rule": rule_i.value,
                       "rows": _risk_rows(panel, bench, chosen, rule_i)}

    acc = {name: {} for name in ACCURACY_ROWS}
    dm_rule = ScoringRule.SQUARED_ERROR if ScoringRule.SQUARED_ERROR in panels_in else next(iter(panels_in))
    floored = []
    for m in chosen:
        sq = panels_in.get(ScoringRule.SQUARED_ERROR)
        ab = panels_in.get(ScoringRule.ABSOLUTE_ERROR)
        acc["RMSE"][m] = (relative_ratio(math.sqrt(sq.series(m).values.mean()),
                                         math.sqrt(sq.series(bench).values.mean()))
                          if sq is not None and sq.series(bench).values.mean() > 0 else UNDEFINED)
        acc["MAE"][m] = (relative_ratio(ab.series(m).values.mean(), ab.series(bench).values.mean())
                         if ab is not None and ab.series(bench).values.mean() > 0 else UNDEFINED)
        if isinstance(data, ForecastTable):
            acc["rho(1)"][m] = autocorr1(data.errors(m))
        else:
            acc["rho(1)"][m] = autocorr1(data.series(m).values)
        p = panels_in[dm_rule]
        x = p.series(bench).values - p.series(m).values
        res = dm_test(x, hac)
        acc["DM t-stat"][m] = res.statistic
        if res.lrv.floored:
            floored.append(m)
    if ScoringRule.SQUARED_ERROR not in panels_in:
        acc.pop("RMSE")
    if ScoringRule.ABSOLUTE_ERROR not in panels_in:
        acc.pop("MAE")
    panels["C"] = {"title": "Classical Forecast Accuracy", "scoring_rule": dm_rule.value, "rows": acc}
    panels = {k: panels[k] for k in sorted(panels)}

    report = {
        "command": "evaluate",
        "benchmark": bench,
        "models": chosen,
        "periods": {"count": n, "first": labels[0] if labels else None,
                    "last": labels[-1] if labels else None},
        "window": window or {"start": None, "end": None},
        "pool": {"models": list(first.model_ids), "size": first.pool_size,
                 "hash": first.pool_hash()},
        "hac": hac.describe(n),
        "notes": {"rho1_source": rho_source, "dm_scoring_rule": dm_rule.value,
                  "lrv_floored": floored, "maxdd_sign": "negated"},
        "panels": panels,
    }
    report = canon(report)
    if highlight:
        report["best"] = _best_block(report["panels"])
    return report


def plot_series(data, benchmark: Optional[str] = None, models=None, rule=None) -> dict:
    """``{(model, rule): rows}`` with rows ``(period, cumulative_gain, drawdown)``."""
    if isinstance(data, ForecastTable):
        panels_in = {r: data.loss_panel(r) for r in (ScoringRule.SQUARED_ERROR, ScoringRule.ABSOLUTE_ERROR)}
        bench = benchmark or data.benchmark_id
    else:
        rule = ScoringRule(rule or ScoringRule.EXTERNAL)
        panels_in = {rule: data}
        bench = benchmark or data.benchmark_id
    first = next(iter(panels_in.values()))
    if bench not in first.model_ids:
        raise ValidationError(f"benchmark {bench!r} not in panel {list(first.model_ids)}")
    labels = first.period_labels or tuple(str(i + 1) for i in range(first.n_periods))
    out = {}
    for m in _select_models(first.model_ids, bench, models):
        for r, panel in panels_in.items():
            x = panel.series(bench).values - panel.series(m).values
            cum = cumulative_gains(x)
            dd, _ = drawdown(x)
            out[(m, r.value)] = list(zip(labels, cum.tolist(), dd.tolist()))
    return out


def meta_report(grid: MetaGrid, normalization=Normalization.RATIO_PERCENT, models=None,
                highlight: bool = True) -> dict:
    """Return/Vol/Sharpe/Sortino/Omega/Edge per model and per metric of the grid."""
    normalization = Normalization(normalization)
    bench = grid.benchmark_model
    out = {}
    for metric in grid.metric_names():
        all_models = grid.models(metric)
        chosen = _select_models(all_models, bench, models)
        edge_error = None
        try:
            panel = grid.loss_panel(metric)
            pool = {"models": list(panel.model_ids), "size": panel.pool_size, "hash": panel.pool_hash()}
        except PoolTooSmallError as exc:
            panel, edge_error = None, str(exc)
            pool = {"models": all_models, "size": len(all_models), "hash": None}
        rows = {}
        n_cells = 0
        for m in chosen:
            ret = meta_returns(grid, m, normalization, metric)
            mm = meta_metrics(ret)
            n_cells = max(n_cells, mm.n)
            rows[m] = {
                "Return": mm.mean, "Vol": mm.vol, "Sharpe": mm.sharpe,
                "Sortino": mm.sortino, "Omega": mm.omega,
                "Edge": meta_edge(grid, m, metric) if panel is not None else UNDEFINED,
            }
        block = {"models": chosen, "n_cells": n_cells, "pool": pool, "rows": rows}
        if edge_error:
            block["edge_error"] = edge_error
        out[metric] = block
    report = canon({
        "command": "meta",
        "benchmark": bench,
        "normalization": normalization.value,
        "metrics": out,
    })
    if highlight:
        for block in report["metrics"].values():
            cols = {c: {m: block["rows"][m][c] for m in block["models"]} for c in META_COLUMNS}
            block["best"] = {c: rank_best(v, ROW_DIRECTION[c]) for c, v in cols.items()}
    return report


def simulate_report(cfg: SimConfig, include_dm: bool = True) -> dict:
    res = simulate_null_edge(cfg)
    se = res.win_standard_error
    freq = res.win_frequency
    per = res.per_replication
    report = {
        "command": "simulate",
        "config": cfg.to_dict(),
        "generator": "numpy PCG64, SeedSequence([seed, stream, replication])",
        "null_edge": {
            "mean_edge": res.mean_edge,
            "band": list(cfg.band),
            "within_band": res.within_band,
            "replications": cfg.replications,
            "per_replication_sd": float(np.std(per, ddof=1)) if per.size > 1 else 0.0,
            "win_frequency": freq,
            "win_expected": 1.0 / cfg.pool_size,
            "win_standard_error": se,
            "win_within_3se": bool(np.all(np.abs(freq - 1.0 / cfg.pool_size) <= 3 * se)),
            "per_replication": per,
        },
    }
    if include_dm:
        dm = simulate_dm_penalty(cfg)
        report["dm_penalty"] = {
            "ar1_coefficient": cfg.ar1_coefficient,
            "drift": cfg.drift,
            "bartlett_lag": dm.bartlett_lag,
            "mean_abs_dm_k0": dm.mean_abs_k0,
            "mean_abs_dm_bartlett": dm.mean_abs_bartlett,
            "penalized": dm.mean_abs_bartlett < dm.mean_abs_k0,
        }
    return canon(report)
