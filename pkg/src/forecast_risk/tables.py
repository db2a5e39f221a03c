"""Fixed-precision table rendering (markdown and CSV) for reports."""

from __future__ import annotations

import csv
import io
import math

ONE_DECIMAL = {"Return", "Vol"}  # meta tables print these with one decimal


def fmt(value, decimals: int = 2) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "n/a"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{decimals}f}"
    if float(text) == 0:
        text = text.lstrip("-")
    return text


def _mark(text: str, model: str, flags: dict) -> str:
    if not flags:
        return text
    if flags.get("best") == model:
        return f"**{text}**"
    if flags.get("second") == model:
        return f"*{text}*"
    return text


def _md_row(cells) -> str:
    return "| " + " | ".join(cells) + " |"


def _evaluate_grid(report: dict):
    """Yield ``(panel_key, title, row_name, {model: value})`` in table order."""
    for key, panel in report["panels"].items():
        for row, values in panel["rows"].items():
            yield key, panel["title"], row, values


def _evaluate_markdown(report: dict) -> str:
    models = report["models"]
    best = report.get("best", {})
    per = report["periods"]
    span = f"{per['first']} -- {per['last']}" if per["first"] is not None else f"{per['count']} periods"
    hac = report["hac"]
    lines = [
        f"# Forecast risk report vs {report['benchmark']} ({span}, T={per['count']})",
        "",
        _md_row([""] + models),
        _md_row(["---"] + ["---:"] * len(models)),
    ]
    current = None
    for key, title, row, values in _evaluate_grid(report):
        if key != current:
            lines.append(_md_row([f"**Panel {key}: {title}**"] + [""] * len(models)))
            current = key
        flags = best.get(key, {}).get(row, {})
        lines.append(_md_row([row] + [_mark(fmt(values.get(m)), m, flags) for m in models]))
    notes = report["notes"]
    lines += [
        "",
        f"MaxDD printed negative. rho(1) measured on {notes['rho1_source']}. "
        f"DM on {notes['dm_scoring_rule']} gains, {hac['kernel']} kernel, lag {hac['max_lag']} ({hac['lag_rule']}). "
        f"Edge pool {report['pool']['hash']} ({report['pool']['size']} models).",
    ]
    if notes["lrv_floored"]:
        lines.append(f"Long-run variance floored for: {', '.join(notes['lrv_floored'])}.")
    if best:
        lines.append("Best: **bold**; second-best: *italic*.")
    return "\n".join(lines) + "\n"


def _evaluate_csv(report: dict) -> str:
    models = report["models"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["panel", "metric"] + models)
    for key, _, row, values in _evaluate_grid(report):
        w.writerow([key, row] + [fmt(values.get(m)) for m in models])
    return buf.getvalue()


def _meta_cell(col, value):
    return fmt(value, 1 if col in ONE_DECIMAL else 2)


def _meta_markdown(report: dict) -> str:
    lines = [f"# Meta-analysis vs {report['benchmark']} ({report['normalization']})"]
    for metric, block in report["metrics"].items():
        cols = ["Return", "Vol", "Sharpe", "Sortino", "Omega", "Edge"]
        best = block.get("best", {})
        lines += ["", f"## {metric} (N={block['n_cells']} cells)", "",
                  _md_row(["Model"] + cols), _md_row(["---"] + ["---:"] * len(cols))]
        for m in block["models"]:
            row = block["rows"][m]
            lines.append(_md_row([m] + [_mark(_meta_cell(c, row[c]), m, best.get(c, {})) for c in cols]))
        if "edge_error" in block:
            lines += ["", f"Edge not computed: {block['edge_error']}"]
    return "\n".join(lines) + "\n"


def _meta_csv(report: dict) -> str:
    cols = ["Return", "Vol", "Sharpe", "Sortino", "Omega", "Edge"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "model"] + cols)
    for metric, block in report["metrics"].items():
        for m in block["models"]:
            w.writerow([metric, m] + [_meta_cell(c, block["rows"][m][c]) for c in cols])
    return buf.getvalue()


def _simulate_pairs(report: dict):
    ne = report["null_edge"]
    yield "mean_edge", fmt(ne["mean_edge"], 4)
    yield "band", f"[{fmt(ne['band'][0])}, {fmt(ne['band'][1])}]"
    yield "within_band", fmt(ne["within_band"])
    yield "win_frequency", " ".join(fmt(f, 4) for f in ne["win_frequency"])
    yield "win_within_3se", fmt(ne["win_within_3se"])
    if "dm_penalty" in report:
        dm = report["dm_penalty"]
        yield "mean_abs_dm_k0", fmt(dm["mean_abs_dm_k0"], 4)
        yield "mean_abs_dm_bartlett", fmt(dm["mean_abs_dm_bartlett"], 4)
        yield "bartlett_lag", fmt(dm["bartlett_lag"])


def render_markdown(report: dict) -> str:
    kind = report.get("command")
    if kind == "evaluate":
        return _evaluate_markdown(report)
    if kind == "meta":
        return _meta_markdown(report)
    lines = ["# Null simulation", "", "| quantity | value |", "| --- | ---: |"]
    lines += [f"| {k} | {v} |" for k, v in _simulate_pairs(report)]
    return "\n".join(lines) + "\n"


def render_csv(report: dict) -> str:
    kind = report.get("command")
    if kind == "evaluate":
        return _evaluate_csv(report)
    if kind == "meta":
        return _meta_csv(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "value"])
    w.writerows(_simulate_pairs(report))
    return buf.getvalue()
