"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The verdict lines are printed as the tests run (visible with ``-s``) and
repeated in an "acceptance criteria" section at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

import oracles
from fixtures.build_fixtures import RMSE_PANEL_SHARPE
from forecast_risk import (
    HacConfig,
    Kernel,
    LossPanel,
    MetaCell,
    MetaGrid,
    SimConfig,
    dm_statistic,
    edge_ratio,
    max_drawdown,
    meta_returns,
    omega_ratio,
    sharpe_ratio,
    simulate_dm_penalty,
    simulate_null_edge,
    sortino_ratio,
)
from forecast_risk.cli import main
from forecast_risk.panel_io import load_forecasts, load_manifest, loads_report
from forecast_risk.report import evaluate_report
from forecast_risk.tables import fmt

VERDICTS = []


def verdict(number, ok, detail, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.2f}s" + (f" / limit {limit:g}s]" if limit else "]")
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'} - {detail}{timing}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def close(a, b, tol=1e-12):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)


def test_criterion_01_meta_sharpe(fixtures, tmp_path, capsys):
    out = tmp_path / "t2.json"
    t0 = time.perf_counter()
    code = main(["meta", "--input", str(fixtures / "rmse_meta_grid.csv"),
                 "--manifest", str(fixtures / "rmse_meta_manifest.json"), "--output", str(out)])
    elapsed = time.perf_counter() - t0
    rows = loads_report(out.read_text())["metrics"]["RMSE"]["rows"]
    got = {m: rows[m]["Sharpe"] for m in RMSE_PANEL_SHARPE}
    bad = {m: v for m, v in got.items() if abs(v - RMSE_PANEL_SHARPE[m]) > 0.01}
    detail = ", ".join(f"{m} {v:.3f} vs {RMSE_PANEL_SHARPE[m]:.2f}" for m, v in got.items())
    verdict(1, code == 0 and not bad and elapsed < 1.0, f"RMSE meta grid Sharpe ±0.01: {detail}", elapsed, 1)


def test_criterion_02_meta_return_example():
    g = MetaGrid((MetaCell("t", "1", "s", "B", 1.0), MetaCell("t", "1", "s", "M", 0.90)), "B")
    r = meta_returns(g, "M").returns[0]
    verdict(2, r == 10.0, f"benchmark 1.0, model 0.90 gives {float(r)!r} (want exactly 10.0)")


def test_criterion_03_dm_sharpe_identity():
    rng = np.random.default_rng(303)
    k0 = HacConfig.fixed(0, Kernel.TRUNCATED_UNIFORM)
    worst, n = 0.0, 0
    t0 = time.perf_counter()
    while n < 1000:
        T = int(rng.integers(5, 201))
        r = rng.normal(rng.normal(0, 0.5), rng.uniform(0.1, 3), size=T)
        if np.ptp(r) == 0:
            continue
        dm = dm_statistic(r, k0)
        target = math.sqrt(T) * sharpe_ratio(r, "population_T")
        worst = max(worst, abs(dm - target) / abs(target))
        n += 1
    elapsed = time.perf_counter() - t0
    verdict(3, worst <= 1e-12 and elapsed < 5, f"K=0 DM = sqrt(T) Sharpe on {n} series, "
            f"max rel err {worst:.1e}", elapsed, 5)


def test_criterion_04_autocorrelation_penalty():
    t0 = time.perf_counter()
    base = dict(periods=1000, replications=500, drift=0.05, seed=20240101)
    pers = simulate_dm_penalty(SimConfig(**base, ar1_coefficient=0.5))
    iid = simulate_dm_penalty(SimConfig(**base, ar1_coefficient=0.0))
    elapsed = time.perf_counter() - t0
    gap = abs(iid.mean_abs_bartlett - iid.mean_abs_k0)
    ok = pers.mean_abs_bartlett < pers.mean_abs_k0 and gap < 0.05 and elapsed < 30
    verdict(4, ok, f"ar1=0.5: |DM| Bartlett {pers.mean_abs_bartlett:.3f} < K=0 {pers.mean_abs_k0:.3f}; "
            f"ar1=0: gap {gap:.3f} < 0.05 (T=1000, drift 0.05, R=500)", elapsed, 30)


def test_criterion_05_edge_null_calibration(fixtures):
    cfg = SimConfig.from_file(fixtures / "sim_default.json")
    t0 = time.perf_counter()
    res = simulate_null_edge(cfg)
    elapsed = time.perf_counter() - t0
    K = cfg.pool_size
    se = res.win_standard_error
    dev = np.abs(res.win_frequency - 1 / K) / se
    freq_ok = bool(np.all(dev <= 3))
    lo, hi = cfg.band
    ok = res.within_band and freq_ok and elapsed < 60
    verdict(5, ok, f"mean edge {res.mean_edge:.4f} in [{lo}, {hi}]: {res.within_band} "
            f"(iid exponential null limit 1/(K-1) = {1 / (K - 1):.4f}); "
            f"win frequency within 3 SE of 1/K: {freq_ok} (max {dev.max():.2f} SE)", elapsed, 60)


def test_criterion_06_strict_second_is_zero():
    rng = np.random.default_rng(6)
    best = rng.exponential(size=500)
    second = best + rng.uniform(0.01, 1, size=500)
    others = second[:, None] + rng.uniform(0.01, 1, size=(500, 3))
    panel = LossPanel(("best", "second", "x", "y", "z"), np.column_stack([best, second, others]))
    e = edge_ratio(panel, "second")
    verdict(6, e == 0.0 and not math.copysign(1, e) < 0, f"strictly-second column gets {e!r}")


def test_criterion_07_drawdown_oracle():
    rng = np.random.default_rng(7)
    series = [rng.normal(0, 1, size=int(rng.integers(1, 51))) for _ in range(10_000)]
    t0 = time.perf_counter()
    got = [max_drawdown(x) for x in series]
    elapsed = time.perf_counter() - t0
    mism = sum(not close(g, oracles.brute_max_drawdown(x.tolist())) for g, x in zip(got, series))
    verdict(7, mism == 0 and elapsed < 10,
            f"MaxDD vs brute force on 10000 series (T<=50): {mism} mismatches", elapsed, 10)


def test_criterion_08_metric_oracle_battery():
    rng = np.random.default_rng(8)
    series = []
    while len(series) < 10_000:
        x = rng.normal(rng.normal(0, 0.3), rng.uniform(0.1, 5), size=int(rng.integers(2, 101)))
        if (x > 0).any() and (x < 0).any():
            series.append(x)
    t0 = time.perf_counter()
    lib = [(sharpe_ratio(x), sortino_ratio(x), omega_ratio(x)) for x in series]
    elapsed = time.perf_counter() - t0
    oracle_bad = invariant_bad = 0
    for x, (sh, so, om) in zip(series, lib):
        xs = x.tolist()
        if not (close(sh, oracles.sharpe(xs)) and close(so, oracles.sortino(xs))
                and close(om, oracles.omega(xs))):
            oracle_bad += 1
        c = 3.7
        if not (close(sharpe_ratio(c * x), sh, 1e-10) and close(sortino_ratio(c * x), so, 1e-10)
                and close(omega_ratio(c * x), om, 1e-10) and close(omega_ratio(-x), 1 / om, 1e-10)):
            invariant_bad += 1
    ok = oracle_bad == 0 and invariant_bad == 0 and elapsed < 10
    verdict(8, ok, f"Sharpe/Sortino/Omega vs formula oracle on 10000 series: {oracle_bad} mismatches; "
            f"scale and sign-flip invariants: {invariant_bad} violations", elapsed, 10)


def test_criterion_09_handworked_panel(fixtures):
    m = load_manifest(fixtures / "handworked_manifest.json")
    rep = evaluate_report(load_forecasts(fixtures / "handworked_forecasts.csv", m))
    rows = rep["panels"]["A"]["rows"]
    want = {"Return": "1.00", "Sharpe": "0.71", "Sortino": "2.00", "Omega": "5.00", "MaxDD": "-1.00"}
    got = {k: fmt(rows[k]["M"]) for k in want}
    verdict(9, got == want, "Panel A " + ", ".join(f"{k} {v}" for k, v in got.items()))


def test_criterion_10_cli_determinism(fixtures, tmp_path, capsys):
    sim = tmp_path / "sim.json"
    sim.write_text('{"pool_size": 5, "periods": 500, "replications": 5, "seed": 99}')
    hand = ["--input", str(fixtures / "handworked_forecasts.csv"),
            "--manifest", str(fixtures / "handworked_manifest.json")]
    jobs = {
        "evaluate": hand,
        "meta": ["--input", str(fixtures / "m4_meta_grid.csv"),
                 "--manifest", str(fixtures / "m4_meta_manifest.json")],
        "plotdata": hand,
        "simulate": ["--input", str(sim), "--seed", "5"],
    }
    differing = []
    for cmd, args in jobs.items():
        outputs = []
        for run in ("a", "b"):
            target = tmp_path / f"{cmd}_{run}"
            assert main([cmd, *args, "--output", str(target)]) == 0
            if target.is_dir():
                outputs.append([(f.name, f.read_bytes()) for f in sorted(target.iterdir())])
            else:
                outputs.append(target.read_bytes())
        if outputs[0] != outputs[1]:
            differing.append(cmd)
    verdict(10, not differing, f"byte-identical reruns of {', '.join(jobs)}; differing: {differing or 'none'}")
