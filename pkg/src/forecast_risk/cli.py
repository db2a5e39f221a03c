"""Command line: ``forecast-risk {evaluate,meta,plotdata,simulate}``.

Exit codes: 0 success, 1 validation error, 2 I/O error. Any long flag can also
be given in a JSON file passed with ``--config`` (keys are flag names with
dashes or underscores); flags on the command line take precedence.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .dm import HacConfig, Kernel
from .errors import ConfigError, ValidationError
from .losses import ScoringRule
from .meta import Normalization
from .panel_io import (
    InputKind,
    ReportFormat,
    load_forecasts,
    load_manifest,
    load_meta_grid,
    load_panel,
    render_report,
    write_delimited,
)
from .report import evaluate_report, meta_report, plot_series, simulate_report
from .simulate import SimConfig

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2

DEFAULTS = {
    "format": "json",
    "hac_kernel": "bartlett",
    "hac_lag": "auto",
    "normalization": "ratio_percent",
    "highlight": True,
    "models": "all",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"usage: {message}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file holding default values for any flag")
    p.add_argument("--input", help="data file (for simulate: simulation config JSON)")
    p.add_argument("--manifest", help="dataset manifest JSON")
    p.add_argument("--benchmark", help="benchmark model id (overrides the manifest)")
    p.add_argument("--models", help="comma-separated model ids, or 'all'")
    p.add_argument("--window-start", help="first period label to include")
    p.add_argument("--window-end", help="last period label to include")
    p.add_argument("--hac-kernel", choices=[k.value for k in Kernel])
    p.add_argument("--hac-lag", help="integer lag, or 'auto' (h-1 if the manifest has a horizon, else 1.5*T^(1/3))")
    p.add_argument("--output", help="output file (plotdata: output directory); stdout if omitted")
    p.add_argument("--format", help="json | csv | markdown")
    p.add_argument("--seed", type=int, help="simulation seed")
    p.add_argument("--normalization", choices=[n.value for n in Normalization])
    p.add_argument("--no-highlight", dest="highlight", action="store_const", const=False,
                   help="skip best/second-best flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forecast-risk", description="Risk-adjusted forecast evaluation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("evaluate", "Panels A/B/C for every model against the benchmark"),
        ("meta", "cross-sectional meta statistics from a long-format grid"),
        ("plotdata", "cumulative gains and drawdown paths as CSV files"),
        ("simulate", "Monte-Carlo null calibration of the Edge Ratio and DM penalty"),
    ):
        _common(sub.add_parser(name, help=help_))
    return parser


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    values = dict.fromkeys(vars(args))
    values.update(DEFAULTS)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{args.config}: invalid JSON ({exc})") from None
        if not isinstance(cfg, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        for key, val in cfg.items():
            key = key.replace("-", "_").lstrip("_")
            if key not in vars(args) or key in ("command", "config"):
                raise ConfigError(f"{args.config}: unknown setting {key!r}")
            values[key] = val
    values.update({k: v for k, v in vars(args).items() if v is not None})
    return argparse.Namespace(**values)


def _models(value):
    if value is None or value == "all":
        return None
    if isinstance(value, list):
        return [str(v) for v in value]
    return [m.strip() for m in str(value).split(",") if m.strip()]


def _hac(args, horizon) -> HacConfig:
    lag = args.hac_lag
    if lag is None or str(lag) == "auto":
        return HacConfig.default_for(horizon, kernel=args.hac_kernel)
    try:
        lag = int(lag)
    except ValueError:
        raise ConfigError(f"--hac-lag must be an integer or 'auto', got {lag!r}") from None
    return HacConfig.fixed(lag, kernel=args.hac_kernel)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigError(f"{args.command} needs --{', --'.join(m.replace('_', '-') for m in missing)}")


def _load_evaluation_data(args):
    _require(args, "input", "manifest")
    manifest = load_manifest(args.manifest)
    if args.benchmark:
        manifest = manifest.replace(benchmark_id=args.benchmark)
    if manifest.input_kind is InputKind.FORECASTS:
        data = load_forecasts(args.input, manifest)
    else:
        data = load_panel(args.input, manifest)
    data = data.window(args.window_start, args.window_end)
    return manifest, data


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_evaluate(args) -> dict:
    manifest, data = _load_evaluation_data(args)
    report = evaluate_report(
        data,
        benchmark=manifest.benchmark_id,
        models=_models(args.models),
        hac=_hac(args, manifest.horizon),
        rule=manifest.scoring_rule,
        highlight=args.highlight,
        window={"start": args.window_start, "end": args.window_end},
    )
    _emit(render_report(report, args.format), args.output)
    return report


def cmd_meta(args) -> dict:
    _require(args, "input", "manifest")
    manifest = load_manifest(args.manifest)
    if args.benchmark:
        manifest = manifest.replace(benchmark_id=args.benchmark)
    grid = load_meta_grid(args.input, manifest)
    report = meta_report(grid, args.normalization, _models(args.models), args.highlight)
    _emit(render_report(report, args.format), args.output)
    return report


_UNSAFE = re.compile(r"[^A-Za-z0-9._+-]")


def cmd_plotdata(args) -> list:
    manifest, data = _load_evaluation_data(args)
    series = plot_series(data, manifest.benchmark_id, _models(args.models), manifest.scoring_rule)
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for (model, rule), rows in series.items():
        path = outdir / f"{_UNSAFE.sub('_', model)}__{rule}.csv"
        write_delimited(path, ["period", "cumulative_gain", "drawdown"],
                        [(p, repr(c), repr(d)) for p, c, d in rows])
        written.append(path)
    return written


def cmd_simulate(args) -> dict:
    cfg = SimConfig.from_file(args.input) if args.input else SimConfig()
    if args.seed is not None:
        cfg = SimConfig.from_dict({**cfg.to_dict(), "seed": args.seed})
    report = simulate_report(cfg)
    _emit(render_report(report, args.format), args.output)
    return report


COMMANDS = {"evaluate": cmd_evaluate, "meta": cmd_meta, "plotdata": cmd_plotdata,
            "simulate": cmd_simulate}


def main(argv=None) -> int:
    try:
        args = _resolve(build_parser().parse_args(argv))
        ReportFormat.parse(args.format)
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
