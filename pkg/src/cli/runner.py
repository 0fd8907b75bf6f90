"""
Run and sweep experiments, write results, return a manifest.

Outputs are written atomically. CSV files carry the resolved config as a
'#' comment line above the header; JSON files embed it under "config". A
manifest with the config hash, code version, wall-clock duration and the
summary metrics is written next to the result as <name>.manifest.json.

Sweep grids expand in lexicographic key order, each key's values in the
order given, and rows are written in that order regardless of how long each
point takes.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from importlib import metadata
from pathlib import Path
from typing import Any

from src.cli.config import ExperimentConfig
from src.cli.experiments import EXPERIMENTS, ExperimentResult
from src.common.data_loader import output_path, to_json_text, write_csv_rows, write_json
from src.common.errors import ConfigError, MaxwellError

logger = logging.getLogger(__name__)

DISTRIBUTION_NAME = "maxwell-demon-lab"
FALLBACK_VERSION = "0.1.0"

MAX_GRID_POINTS = 1_000_000


def code_version() -> str:
    try:
        return metadata.version(DISTRIBUTION_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    version: str
    duration_s: float
    summary: dict[str, Any]
    output: str | None
    n_rows: int

    def to_json(self) -> dict[str, Any]:
        return {
            "config_hash": self.config_hash,
            "version": self.version,
            "duration_s": self.duration_s,
            "summary": self.summary,
            "output": self.output,
            "n_rows": self.n_rows,
        }


def _default_output(config: ExperimentConfig) -> Path:
    return output_path(f"{config.experiment}.{config.output_format}")


def _write(config: ExperimentConfig, rows: list[dict[str, Any]], extra: dict[str, Any]) -> Path:
    target = Path(config.output_path).resolve() if config.output_path else _default_output(config)
    if config.output_format == "csv":
        columns: list[str] = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)
        comment = "config: " + to_json_text(config.to_json()).replace("\n", " ")
        return write_csv_rows(target, rows, columns, comment=comment)
    return write_json(target, {"config": config.to_json(), "rows": rows, **extra})


def _manifest_path(result_path: Path) -> Path:
    return result_path.with_name(result_path.stem + ".manifest.json")


def _run_point(config: ExperimentConfig, threads: int | None) -> ExperimentResult:
    experiment = EXPERIMENTS[config.experiment]
    try:
        return experiment.run(config.parameters, config.seed, threads)
    except MaxwellError as exc:
        exc.add_note(f"while running experiment {config.experiment!r} with parameters {config.parameters}")
        raise


def _finish(
    config: ExperimentConfig,
    rows: list[dict[str, Any]],
    summary: dict[str, Any],
    extra: dict[str, Any],
    started: float,
) -> RunManifest:
    target = _write(config, rows, {"summary": summary, **extra})
    manifest = RunManifest(
        config_hash=config.config_hash,
        version=code_version(),
        duration_s=time.perf_counter() - started,
        summary=summary,
        output=str(target),
        n_rows=len(rows),
    )
    write_json(_manifest_path(target), {"config": config.to_json(), **manifest.to_json()})
    logger.info("%s: %d rows -> %s in %.2f s", config.experiment, len(rows), target, manifest.duration_s)
    return manifest


def run(config: ExperimentConfig, threads: int | None = None) -> RunManifest:
    """Execute one experiment and write its single-row table."""
    if config.grid:
        raise ConfigError("config has a [grid] section; use sweep", key="grid")
    started = time.perf_counter()
    result = _run_point(config, threads)
    return _finish(config, [result.row], dict(result.row), {"report": result.report}, started)


def grid_points(config: ExperimentConfig) -> list[dict[str, Any]]:
    """Cartesian product of the grid, keys in lexicographic order."""
    size = config.grid_size
    if size > MAX_GRID_POINTS:
        raise ConfigError(f"grid has {size} points, more than the limit of {MAX_GRID_POINTS}", key="grid")
    keys = sorted(config.grid)
    return [dict(zip(keys, values, strict=True)) for values in itertools.product(*(config.grid[k] for k in keys))]


def sweep(config: ExperimentConfig, threads: int | None = None) -> RunManifest:
    """One row per grid point, each row prefixed with its grid values."""
    started = time.perf_counter()
    points = grid_points(config)
    rows: list[dict[str, Any]] = []
    reports: list[dict[str, Any]] = []
    for point in points:
        result = _run_point(config.at_point(point), threads)
        rows.append({**point, **{k: v for k, v in result.row.items() if k not in point}})
        reports.append(result.report)

    summary: dict[str, Any] = {"n_points": len(points)}
    summarize = EXPERIMENTS[config.experiment].summarize_sweep
    if summarize is not None:
        summary.update(summarize(rows))
    return _finish(config, rows, summary, {"reports": reports}, started)
