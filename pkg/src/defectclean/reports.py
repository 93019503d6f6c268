"""Report emission: quality tables, cleaning summaries, experiment grids.

All emitters are deterministic: given equal inputs they produce byte-equal
files.  CSV cells carry full-precision ``repr`` floats (so averages can be
recomputed exactly from the file); markdown rounds to two decimals for
reading.  Undefined values render as ``n/a`` and never enter averages.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cleaning import CleanSummaryRow
from .harness import ExperimentRun, METRICS
from .quality import CrossReleaseReport, WithinQualityReport

_FORMATS = ("csv", "json", "markdown")


def _float_cell(value: float | None) -> str:
    return "n/a" if value is None else repr(float(value))


def _round_cell(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _markdown_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- quality

def quality_json(
    within: Sequence[WithinQualityReport], cross: Sequence[CrossReleaseReport]
) -> dict:
    return {
        "format": 1,
        "within": [
            {
                "dataset": r.dataset,
                "cases": r.case_count,
                "inconsistent_cases": r.inconsistent_case_count,
                "identical_cases": r.identical_case_count,
            }
            for r in within
        ],
        "cross_release": [
            {
                "project": r.project,
                "release_a": r.release_a,
                "release_b": r.release_b,
                "identical_pairs": r.identical_pair_count,
                "inconsistent_pairs": r.inconsistent_pair_count,
            }
            for r in cross
        ],
    }


def quality_markdown(
    within: Sequence[WithinQualityReport], cross: Sequence[CrossReleaseReport]
) -> str:
    parts = ["# Data quality report", "", "## Within-release problem cases", ""]
    parts.append(
        _markdown_table(
            ("dataset", "cases", "inconsistent", "identical"),
            (
                (r.dataset, str(r.case_count), str(r.inconsistent_case_count),
                 str(r.identical_case_count))
                for r in within
            ),
        )
    )
    if cross:
        parts.extend(["", "## Cross-release problem pairs", ""])
        parts.append(
            _markdown_table(
                ("release 1", "release 2", "identical", "inconsistent"),
                (
                    (r.release_a, r.release_b, str(r.identical_pair_count),
                     str(r.inconsistent_pair_count))
                    for r in cross
                ),
            )
        )
    return "\n".join(parts)


def write_quality_reports(
    within: Sequence[WithinQualityReport],
    cross: Sequence[CrossReleaseReport],
    out_dir: str | Path,
) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out_dir / "quality.json",
        "markdown": out_dir / "quality.md",
    }
    paths["json"].write_text(
        json.dumps(quality_json(within, cross), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    paths["markdown"].write_text(quality_markdown(within, cross), encoding="utf-8")
    return paths


# ---------------------------------------------------------------- cleaning

def clean_summary_json(rows: Sequence[CleanSummaryRow]) -> dict:
    return {
        "format": 1,
        "datasets": [
            {
                "dataset": r.dataset,
                "cases": r.case_count,
                "removed_cases": r.removed_cases,
                "defective": r.defective_count,
                "removed_defective": r.removed_defective,
            }
            for r in rows
        ],
    }


def clean_summary_markdown(rows: Sequence[CleanSummaryRow]) -> str:
    table = _markdown_table(
        ("dataset", "cases", "removed", "defective", "removed defective"),
        (
            (r.dataset, str(r.case_count), str(r.removed_cases),
             str(r.defective_count), str(r.removed_defective))
            for r in rows
        ),
    )
    return "# Cleaning summary (post-cleaning counts)\n\n" + table


def write_clean_summary(
    rows: Sequence[CleanSummaryRow], out_dir: str | Path
) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out_dir / "clean_summary.json",
        "markdown": out_dir / "clean_summary.md",
    }
    paths["json"].write_text(
        json.dumps(clean_summary_json(rows), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    paths["markdown"].write_text(clean_summary_markdown(rows), encoding="utf-8")
    return paths


# -------------------------------------------------------------- experiment

def _grid_columns(run: ExperimentRun) -> list[tuple[str, str]]:
    return [
        (learner, filter_name)
        for learner in run.config.learners
        for filter_name in run.config.filters
    ]


def _grid_rows(run: ExperimentRun, metric: str) -> tuple[list[str], dict]:
    """Change rates per target and column; insertion order is report order."""
    cells: dict[tuple[str, tuple[str, str]], float | None] = {}
    targets: list[str] = []
    for result in run.results:
        if result.metric != metric:
            continue
        if result.target not in targets:
            targets.append(result.target)
        cells[(result.target, (result.learner, result.filter_name))] = (
            result.change.rate_percent
        )
    return targets, cells


def experiment_grid_csv(run: ExperimentRun, metric: str) -> str:
    columns = _grid_columns(run)
    targets, cells = _grid_rows(run, metric)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["target"] + [f"{l}/{f}" for l, f in columns])
    for target in targets:
        writer.writerow(
            [target] + [_float_cell(cells.get((target, c))) for c in columns]
        )
    if targets:
        averages = _column_averages(targets, cells, columns)
        writer.writerow(["AVG"] + [_float_cell(v) for v in averages])
    return buffer.getvalue()


def experiment_grid_markdown(run: ExperimentRun, metric: str) -> str:
    columns = _grid_columns(run)
    targets, cells = _grid_rows(run, metric)
    header = ["target"] + [f"{l}/{f}" for l, f in columns]
    rows = [
        [target] + [_round_cell(cells.get((target, c))) for c in columns]
        for target in targets
    ]
    if targets:
        averages = _column_averages(targets, cells, columns)
        rows.append(["AVG"] + [_round_cell(v) for v in averages])
    title = {"fmeasure": "F-measure", "auc": "AUC"}.get(metric, metric)
    return (
        f"# Rate of {title} change after cleaning (%)\n\n"
        + _markdown_table(header, rows)
    )


def _column_averages(targets, cells, columns) -> list[float | None]:
    # same exclusion rule and mean as evaluation.average_change
    averages = []
    for column in columns:
        defined = [
            cells[(t, column)]
            for t in targets
            if cells.get((t, column)) is not None
        ]
        averages.append(float(np.mean(defined)) if defined else None)
    return averages


def experiment_json(run: ExperimentRun) -> dict:
    return {
        "format": 1,
        "config": run.config.as_dict(),
        "dataset_sizes": {k: dict(v) for k, v in run.dataset_sizes.items()},
        "results": [
            {
                "target": r.target,
                "filter": r.filter_name,
                "learner": r.learner,
                "metric": r.metric,
                "original": r.original,
                "cleaned": r.cleaned,
                "change_percent": r.change.rate_percent,
                "note": r.note,
                "provenance": _plain(r.provenance),
            }
            for r in run.results
        ],
    }


def _plain(value):
    """Recursively coerce provenance values to JSON-friendly types."""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "item"):  # numpy scalars
        return value.item()
    return str(value)


def write_experiment_reports(
    run: ExperimentRun,
    out_dir: str | Path,
    formats: Iterable[str] = _FORMATS,
) -> dict[str, Path]:
    """Write fmeasure_change.{csv,md}, auc_change.{csv,md} and results.json.

    Restricted by ``formats``; re-running an identical experiment rewrites
    byte-identical files.
    """
    formats = set(formats)
    unknown = formats - set(_FORMATS)
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    stems = {"fmeasure": "fmeasure_change", "auc": "auc_change"}
    for metric in METRICS:
        if "csv" in formats:
            path = out_dir / f"{stems[metric]}.csv"
            path.write_text(experiment_grid_csv(run, metric), encoding="utf-8")
            paths[f"{metric}_csv"] = path
        if "markdown" in formats:
            path = out_dir / f"{stems[metric]}.md"
            path.write_text(experiment_grid_markdown(run, metric), encoding="utf-8")
            paths[f"{metric}_markdown"] = path
    if "json" in formats:
        path = out_dir / "results.json"
        path.write_text(
            json.dumps(experiment_json(run), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        paths["json"] = path
    return paths
