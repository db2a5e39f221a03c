"""Reading loss panels, forecast tables and meta grids; writing reports.

Input files are comma-separated UTF-8 text with a header row, ``.`` as the
decimal mark and no thousands separators. Every problem is reported with the
file, line and column where it was found; nothing is skipped silently.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .edge import LossPanel, window_rows
from .errors import (
    BenchmarkAbsentError,
    ConfigError,
    DuplicateKeyError,
    EmptyInputError,
    ParseError,
    UnsupportedRuleError,
)
from .losses import ScoringRule, check_period_labels, compute_losses
from .meta import MetaCell, MetaGrid
from .metrics import UNDEFINED

FORMAT_VERSION = 1


class InputKind(str, Enum):
    FORECASTS = "forecasts"
    LOSSES = "losses"
    META_GRID = "meta_grid"


class SignConvention(str, Enum):
    LOWER_IS_BETTER = "lower_is_better"
    HIGHER_IS_BETTER = "higher_is_better"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"

    @classmethod
    def parse(cls, value) -> "ReportFormat":
        aliases = {
            "json_like_structured": cls.JSON,
            "delimited_table": cls.CSV,
            "markdown_table": cls.MARKDOWN,
            "md": cls.MARKDOWN,
        }
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise ConfigError(f"unknown report format {value!r}") from None


@dataclass(frozen=True)
class DatasetManifest:
    input_kind: InputKind
    benchmark_id: str
    scoring_rule: ScoringRule = ScoringRule.SQUARED_ERROR
    horizon: Optional[int] = None
    sign_convention: SignConvention = SignConvention.LOWER_IS_BETTER
    format_version: int = FORMAT_VERSION
    metric_name: Optional[str] = None
    actual_column: str = "actual"

    def __post_init__(self):
        try:
            object.__setattr__(self, "input_kind", InputKind(self.input_kind))
            object.__setattr__(self, "scoring_rule", ScoringRule(self.scoring_rule))
            object.__setattr__(self, "sign_convention", SignConvention(self.sign_convention))
        except ValueError as exc:
            raise ConfigError(f"manifest: {exc}") from None
        if self.format_version != FORMAT_VERSION:
            raise ConfigError(f"manifest format_version {self.format_version!r} is not supported")
        if self.horizon is not None and (
            isinstance(self.horizon, bool) or not isinstance(self.horizon, int) or self.horizon < 1
        ):
            raise ConfigError(f"manifest horizon must be a positive integer, got {self.horizon!r}")
        if not self.benchmark_id:
            raise ConfigError("manifest needs a benchmark_id")
        object.__setattr__(self, "benchmark_id", str(self.benchmark_id))

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetManifest":
        unknown = sorted(set(d) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigError(f"manifest has unknown fields {unknown}")
        if "input_kind" not in d or "benchmark_id" not in d:
            raise ConfigError("manifest needs input_kind and benchmark_id")
        return cls(**d)

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "input_kind": self.input_kind.value,
            "scoring_rule": self.scoring_rule.value,
            "benchmark_id": self.benchmark_id,
            "horizon": self.horizon,
            "sign_convention": self.sign_convention.value,
            "metric_name": self.metric_name,
            "actual_column": self.actual_column,
        }

    def replace(self, **changes) -> "DatasetManifest":
        d = self.to_dict()
        d.update({k: v for k, v in changes.items() if v is not None})
        return DatasetManifest.from_dict(d)


def load_manifest(path) -> DatasetManifest:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: manifest must be a JSON object")
    return DatasetManifest.from_dict(data)


def _read_rows(path):
    """Header and numbered non-blank body rows of a CSV file."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)
                if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInputError("file is empty", path=path)
    (_, header), body = rows[0], rows[1:]
    header = [h.strip() for h in header]
    if not body:
        raise EmptyInputError("file has a header but no data rows", path=path)
    if len(set(header)) != len(header):
        dup = sorted({h for h in header if header.count(h) > 1})
        raise ParseError(f"duplicate column names {dup}", path=path, line=1)
    for line, row in body:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", path=path, line=line)
    return header, body


def _number(text: str, path, line, column) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"non-numeric cell {text!r}", path=path, line=line, column=column) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite cell {text!r}", path=path, line=line, column=column)
    return value


def _periods(body, path) -> tuple:
    labels = [row[0].strip() for _, row in body]
    seen = {}
    for (line, _), label in zip(body, labels):
        if label in seen:
            raise DuplicateKeyError(
                f"period label {label!r} repeats line {seen[label]}", path=path, line=line
            )
        seen[label] = line
    try:
        return check_period_labels(labels, len(labels))
    except Exception as exc:
        raise ParseError(str(exc), path=path) from None


@dataclass(frozen=True)
class ForecastTable:
    """Actuals plus point forecasts of several models, aligned by period."""

    period_labels: tuple
    actuals: np.ndarray
    model_ids: tuple
    forecasts: np.ndarray
    benchmark_id: str
    horizon: Optional[int] = None

    def errors(self, model: str) -> np.ndarray:
        j = self.model_ids.index(model)
        return self.actuals - self.forecasts[:, j]

    def loss_panel(self, rule) -> LossPanel:
        rule = ScoringRule(rule)
        cols = [compute_losses(self.actuals, self.forecasts[:, j], rule, m).values
                for j, m in enumerate(self.model_ids)]
        return LossPanel(self.model_ids, np.column_stack(cols),
                         self.model_ids.index(self.benchmark_id), self.period_labels)

    def window(self, start=None, end=None) -> "ForecastTable":
        if start is None and end is None:
            return self
        rows = window_rows(self.period_labels, len(self.period_labels), start, end)
        return ForecastTable(tuple(self.period_labels[i] for i in rows), self.actuals[rows],
                             self.model_ids, self.forecasts[rows], self.benchmark_id, self.horizon)


def load_forecasts(path, manifest: DatasetManifest) -> ForecastTable:
    if manifest.input_kind is not InputKind.FORECASTS:
        raise ConfigError(f"manifest input_kind is {manifest.input_kind.value}, expected forecasts")
    header, body = _read_rows(path)
    actual = manifest.actual_column
    if actual not in header[1:]:
        raise ParseError(f"forecast file needs an {actual!r} column", path=path, line=1)
    models = tuple(h for h in header[1:] if h != actual)
    if manifest.benchmark_id not in models:
        raise BenchmarkAbsentError(f"{path}: benchmark {manifest.benchmark_id!r} not among columns {list(models)}")
    labels = _periods(body, path)
    a_col = header.index(actual)
    m_cols = [header.index(m) for m in models]
    actuals = np.array([_number(row[a_col], path, line, actual) for line, row in body])
    fc = np.array([[_number(row[c], path, line, header[c]) for c in m_cols] for line, row in body])
    return ForecastTable(labels, actuals, models, fc.reshape(len(body), len(models)),
                         manifest.benchmark_id, manifest.horizon)


def load_panel(path, manifest: DatasetManifest) -> LossPanel:
    """Loss panel from a losses file, or from a forecasts file via the manifest's rule.

    Higher-is-better inputs are negated here, once, so everything downstream is
    lower-is-better.
    """
    if manifest.input_kind is InputKind.FORECASTS:
        if manifest.scoring_rule is ScoringRule.EXTERNAL:
            raise UnsupportedRuleError("forecast files need scoring_rule squared_error or absolute_error")
        return load_forecasts(path, manifest).loss_panel(manifest.scoring_rule)
    if manifest.input_kind is not InputKind.LOSSES:
        raise ConfigError(f"manifest input_kind is {manifest.input_kind.value}, expected losses or forecasts")
    header, body = _read_rows(path)
    models = tuple(header[1:])
    if manifest.benchmark_id not in models:
        raise BenchmarkAbsentError(f"{path}: benchmark {manifest.benchmark_id!r} not among columns {list(models)}")
    labels = _periods(body, path)
    losses = np.array([[_number(row[c], path, line, header[c]) for c in range(1, len(header))]
                       for line, row in body]).reshape(len(body), len(models))
    if manifest.sign_convention is SignConvention.HIGHER_IS_BETTER:
        losses = -losses
    elif manifest.scoring_rule is not ScoringRule.EXTERNAL and np.any(losses < 0):
        t, k = np.argwhere(losses < 0)[0]
        raise ParseError(f"negative {manifest.scoring_rule.value} loss", path=path,
                         line=body[t][0], column=models[k])
    return LossPanel(models, losses, models.index(manifest.benchmark_id), labels)


GRID_COLUMNS = ("target", "horizon", "design", "model", "value")


def load_meta_grid(path, manifest: DatasetManifest) -> MetaGrid:
    """Long-format grid: one row per (target, horizon, design, model[, metric_name])."""
    if manifest.input_kind is not InputKind.META_GRID:
        raise ConfigError(f"manifest input_kind is {manifest.input_kind.value}, expected meta_grid")
    header, body = _read_rows(path)
    missing = [c for c in GRID_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"grid file lacks columns {missing}", path=path, line=1)
    col = {c: header.index(c) for c in header}
    default_metric = manifest.metric_name or manifest.scoring_rule.value
    sign = -1.0 if manifest.sign_convention is SignConvention.HIGHER_IS_BETTER else 1.0
    cells, seen = [], {}
    for line, row in body:
        metric = row[col["metric_name"]].strip() if "metric_name" in col else default_metric
        fields = [row[col[c]].strip() for c in GRID_COLUMNS[:4]]
        for name, text in zip(GRID_COLUMNS[:4], fields):
            if not text:
                raise ParseError("empty label", path=path, line=line, column=name)
        key = (*fields, metric)
        if key in seen:
            raise DuplicateKeyError(
                f"entry {key} already given on line {seen[key]}", path=path, line=line
            )
        seen[key] = line
        value = sign * _number(row[col["value"]], path, line, "value")
        cells.append(MetaCell(*fields, value, metric))
    if not any(c.model == manifest.benchmark_id for c in cells):
        raise BenchmarkAbsentError(f"{path}: benchmark {manifest.benchmark_id!r} has no rows")
    try:
        return MetaGrid(tuple(cells), manifest.benchmark_id)
    except BenchmarkAbsentError as exc:
        raise BenchmarkAbsentError(f"{path}: {exc}") from None


# --- structured report encoding -------------------------------------------

_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "undefined": UNDEFINED}


def _encode(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "undefined"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_encode(float(v)) for v in obj]
    if isinstance(obj, np.generic):
        return _encode(obj.item())
    if isinstance(obj, Enum):
        return obj.value
    return obj


def _decode(obj):
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def dumps_report(report: dict) -> str:
    """Structured text of a report; non-finite numbers become ``"inf"``/``"-inf"``/``"undefined"``."""
    return json.dumps(_encode(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    return _decode(json.loads(text))


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return loads_report(fh.read())


def render_report(report: dict, fmt) -> str:
    from . import tables

    fmt = ReportFormat.parse(fmt)
    if fmt is ReportFormat.JSON:
        return dumps_report(report)
    if fmt is ReportFormat.CSV:
        return tables.render_csv(report)
    return tables.render_markdown(report)


def write_report(report: dict, path, fmt=ReportFormat.JSON) -> None:
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_delimited(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
