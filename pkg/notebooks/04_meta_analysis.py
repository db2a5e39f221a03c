# coding: utf-8

# # Meta-analysis over a grid of forecasting exercises
#
# A grid cell is one (target, horizon, design) combination. Within a cell a
# model's "return" is its percentage improvement on the benchmark's metric. The
# cells are then treated as a cross-section of returns.

from pathlib import Path

from forecast_risk import load_manifest, load_meta_grid, meta_returns
from forecast_risk.report import meta_report
from forecast_risk.tables import render_markdown

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

grid = load_meta_grid(FIX / "rmse_meta_grid.csv", load_manifest(FIX / "rmse_meta_manifest.json"))
ret = meta_returns(grid, "HNN")
print(len(ret.returns), "cells, first three returns:", ret.returns[:3])

# ## Summary table
#
# Sharpe here is Return/Vol across cells. Best entries are bold, runners-up italic.

print(render_markdown(meta_report(grid)))

# ## Two metrics at once
#
# The M4-style grid carries MASE and OWA side by side; each metric gets its own
# block and its own Edge pool.

m4 = load_meta_grid(FIX / "m4_meta_grid.csv", load_manifest(FIX / "m4_meta_manifest.json"))
rep = meta_report(m4, models=["118", "237", "ARIMA", "ETS"])
for metric, block in rep["metrics"].items():
    print(metric, {m: block["rows"][m]["Sharpe"] for m in block["models"]})
