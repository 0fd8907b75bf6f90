"""
Result file utilities shared by the experiment runner and example scripts.

Reading:
    load_csv_as_tuples   → CSV rows into typed records (NamedTuple factories)
    load_trajectories    → binary trajectory dump back into an array

Writing (all atomic: temp file in the target directory + os.replace):
    write_csv_rows       → one row per process / grid point
    write_json           → reports and manifests
    dump_trajectories    → raw positions, little-endian f64 with a fixed header

Floats are written with 17 significant digits so every value round-trips.
"""

import csv
import io
import json
import os
import struct
import tempfile
from collections.abc import Callable, Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TypeVar

import numpy as np

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Default location for experiment outputs
OUTPUT_ROOT = PROJECT_ROOT / ".output"

# n_traj, n_points, dt, n_steps
TRAJECTORY_HEADER = struct.Struct("<QQdQ")

T = TypeVar("T")


def _resolve(path: str | Path) -> Path:
    """Resolve a path relative to the project root if not absolute."""
    p = Path(path)
    return p if p.is_absolute() else PROJECT_ROOT / p


def format_float(value: float) -> str:
    """17 significant digits, '.' decimal, no thousands separators."""
    return format(float(value), ".17g")


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return format_float(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _atomic_write_bytes(path: Path, payload: bytes) -> None:
    """Write payload to path so that readers never observe a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def output_path(*parts: str) -> Path:
    """Path under .output/ for generated results."""
    return OUTPUT_ROOT.joinpath(*parts)


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


def load_csv_as_tuples(
    csv_path: str | Path,
    record_factory: Callable[..., T],
    skip_header: bool = True,
    comment_prefix: str = "#",
) -> list[T]:
    """
    Load a result CSV and convert rows to typed tuples.

    Args:
        csv_path: Path to the CSV file (absolute or relative to project root)
        record_factory: A NamedTuple class or callable that accepts row values
        skip_header: Whether to skip the header row (default: True)
        comment_prefix: Lines starting with this are skipped (the
            runner writes the resolved config there)

    Returns:
        List of records created by record_factory

    Example:
        class SweepRow(NamedTuple):
            tau: float
            mean_heat: float

        rows = load_csv_as_tuples(
            ".output/erasure.csv",
            lambda tau, heat, *_: SweepRow(float(tau), float(heat)),
        )
    """
    path = _resolve(csv_path)
    records: list[T] = []

    with path.open("r", encoding="utf-8", newline="") as f:
        lines = (line for line in f if not (comment_prefix and line.startswith(comment_prefix)))
        reader = csv.reader(lines)

        if skip_header:
            next(reader, None)

        for row in reader:
            if row:  # Skip empty rows
                records.append(record_factory(*row))

    return records


def load_trajectories(path: str | Path) -> tuple[np.ndarray, float, int]:
    """Read a binary trajectory dump; returns (positions[n_traj, n_points], dt, n_steps)."""
    raw = _resolve(path).read_bytes()
    n_traj, n_points, dt, n_steps = TRAJECTORY_HEADER.unpack_from(raw, 0)
    body = np.frombuffer(raw, dtype="<f8", offset=TRAJECTORY_HEADER.size)
    return body.reshape(n_traj, n_points).astype(np.float64), dt, n_steps


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------


def write_csv_rows(
    path: str | Path,
    rows: Iterable[Mapping[str, Any]],
    columns: Sequence[str] | None = None,
    comment: str | None = None,
) -> Path:
    """Write dict rows as CSV; ``comment`` lines are prefixed with '#' before the header."""
    rows = list(rows)
    if columns is None:
        columns = list(rows[0].keys()) if rows else []

    buffer = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row.get(c, "")) for c in columns])

    target = _resolve(path)
    _atomic_write_bytes(target, buffer.getvalue().encode("utf-8"))
    return target


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.floating | np.integer):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serialisable: {type(value).__name__}")


def to_json_text(payload: Any) -> str:
    """Pretty JSON text with numpy values converted."""
    return json.dumps(payload, indent=2, sort_keys=False, default=_json_default)


def write_json(path: str | Path, payload: Any) -> Path:
    """Write a JSON document atomically."""
    target = _resolve(path)
    _atomic_write_bytes(target, (to_json_text(payload) + "\n").encode("utf-8"))
    return target


def dump_trajectories(path: str | Path, positions: np.ndarray, dt: float, n_steps: int) -> Path:
    """Write positions[n_traj, n_points] as little-endian f64 after a fixed header."""
    arr = np.atleast_2d(np.asarray(positions, dtype="<f8"))
    header = TRAJECTORY_HEADER.pack(arr.shape[0], arr.shape[1], float(dt), int(n_steps))
    target = _resolve(path)
    _atomic_write_bytes(target, header + arr.tobytes(order="C"))
    return target
