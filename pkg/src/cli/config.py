"""
Experiment configuration: strict TOML/JSON parsing against per-experiment schemas.

Layout (TOML shown, JSON uses the same keys):

    experiment = "szilard"
    seed = 7

    [parameters]
    n_particles = 1
    l_over_L = 0.5

    [output]
    path = ".output/szilard.csv"
    format = "csv"

    [grid]                     # sweeps only
    beta_eps1 = [0.01, 1.0, 30.0]

Unknown keys anywhere are rejected with the key name and its line in the
source. Missing parameters take the schema default, and the resolved config
is what runs and what gets recorded, so parse -> to_json -> from_mapping is
the identity.
"""

import hashlib
import json
import re

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from src.common.errors import ConfigError

SEED_LIMIT = 1 << 64

OUTPUT_FORMATS = ("csv", "json")

TOP_LEVEL_KEYS = ("experiment", "seed", "parameters", "output", "grid")
OUTPUT_KEYS = ("path", "format")

# Parameter types understood by the schema
FLOAT, INT, STR, BOOL, FLOAT_LIST = "float", "int", "str", "bool", "list[float]"

# Allowed values of enum-typed string parameters
CHOICES: dict[str, tuple[str, ...]] = {
    "statistics": ("boltzmann", "boson", "fermion"),
    "alpha_model": ("explicit", "planckian"),
    "rule": ("work_threshold", "deadline_only"),
}

# name -> {parameter -> (type, default)}
SCHEMAS: dict[str, dict[str, tuple[str, Any]]] = {
    "erasure": {
        "tau": (FLOAT, 20.0),
        "f_max": (FLOAT, 4.0),
        "n_traj": (INT, 1000),
        "dt": (FLOAT, 2.5e-4),
        "kT": (FLOAT, 1.0),
        "chunk_size": (INT, 1000),
        "dump_path": (STR, ""),
    },
    "jarzynski": {
        "k1": (FLOAT, 1.0),
        "k2": (FLOAT, 4.0),
        "tau": (FLOAT, 10.0),
        "n_traj": (INT, 100_000),
        "dt": (FLOAT, 0.01),
        "kT": (FLOAT, 1.0),
    },
    "szilard": {
        "n_particles": (INT, 1),
        "statistics": (STR, "boltzmann"),
        "l_over_L": (FLOAT, 0.5),
        "beta_eps1": (FLOAT, 1.0),
    },
    "bounds": {
        "phonon_coefficient": (FLOAT, 1.0),
        "delta_s": (FLOAT, 0.6931471805599453),
        "tau": (FLOAT, 1.0),
        "beta": (FLOAT, 1.0),
        "alpha_model": (STR, "planckian"),
        "alpha": (FLOAT, 1.0),
        "d": (INT, 2),
        "bath_size": (INT, 100),
        "n_copies": (INT, 1),
        "epsilon": (FLOAT, 0.0),
        "populations": (FLOAT_LIST, [0.5, 0.5]),
    },
    "feedback": {
        "error": (FLOAT, 0.1),
        "temperature": (FLOAT, 1.0),
        "delta_f_y": (FLOAT, 0.0),
        "step_energy": (FLOAT, 1.0),
        "feedback_period": (FLOAT, 1.0),
        "n_ticks": (INT, 10_000),
        "ratchet": (BOOL, True),
    },
    "gamble": {
        "gap_start": (FLOAT, 0.0),
        "gap_stop": (FLOAT, 4.0),
        "tau": (FLOAT, 1.0),
        "rate": (FLOAT, 0.5),
        "rule": (STR, "work_threshold"),
        "threshold": (FLOAT, 0.5),
        "n_traj": (INT, 100_000),
        "n_grid": (INT, 1000),
        "kT": (FLOAT, 1.0),
    },
    "reeb_wolf": {
        "n_trials": (INT, 500),
        "beta_min": (FLOAT, 0.1),
        "beta_max": (FLOAT, 10.0),
    },
}


def _line_of(text: str | None, key: str) -> int | None:
    """1-based line of the first assignment of ``key`` (TOML or JSON style)."""
    if not text:
        return None
    pattern = re.compile(rf'^\s*(?:"{re.escape(key)}"|{re.escape(key)})\s*[=:]|"{re.escape(key)}"\s*:')
    for number, line in enumerate(text.splitlines(), start=1):
        if pattern.search(line):
            return number
    return None


def _reject(message: str, key: str, text: str | None) -> ConfigError:
    return ConfigError(message, key=key, line=_line_of(text, key))


def _coerce(name: str, kind: str, value: Any, text: str | None) -> Any:
    """Strict coercion: int is accepted where float is expected, nothing else converts."""
    if kind == FLOAT:
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise _reject(f"parameter {name!r} must be a number, got {value!r}", name, text)
        return float(value)
    if kind == INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise _reject(f"parameter {name!r} must be an integer, got {value!r}", name, text)
        return value
    if kind == STR:
        if not isinstance(value, str):
            raise _reject(f"parameter {name!r} must be a string, got {value!r}", name, text)
        allowed = CHOICES.get(name)
        if allowed is not None and value not in allowed:
            raise _reject(f"parameter {name!r} must be one of {allowed}, got {value!r}", name, text)
        return value
    if kind == BOOL:
        if not isinstance(value, bool):
            raise _reject(f"parameter {name!r} must be true or false, got {value!r}", name, text)
        return value
    if kind == FLOAT_LIST:
        if not isinstance(value, list) or not value:
            raise _reject(f"parameter {name!r} must be a non-empty list of numbers", name, text)
        return [_coerce(name, FLOAT, v, text) for v in value]
    raise ConfigError(f"unknown parameter type {kind!r}", key=name)


@dataclass(frozen=True)
class ExperimentConfig:
    """A resolved experiment: every parameter present and typed."""

    experiment: str
    parameters: dict[str, Any]
    seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"
    grid: dict[str, list[Any]] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], source_text: str | None = None) -> "ExperimentConfig":
        """
        Validate a parsed document.

        Args:
            data: Mapping from tomllib/json
            source_text: Original text, used only to report line numbers

        Raises:
            ConfigError: on unknown keys, wrong types, or a missing experiment
        """
        if not data:
            raise ConfigError("empty configuration: 'experiment' is required", key="experiment")
        for key in data:
            if key not in TOP_LEVEL_KEYS:
                raise _reject(f"unknown top-level key {key!r}", key, source_text)

        experiment = data.get("experiment")
        if experiment not in SCHEMAS:
            raise _reject(
                f"experiment must be one of {sorted(SCHEMAS)}, got {experiment!r}", "experiment", source_text
            )
        schema = SCHEMAS[experiment]

        seed = data.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or not (0 <= seed < SEED_LIMIT):
            raise _reject(f"seed must be an unsigned 64-bit integer, got {seed!r}", "seed", source_text)

        raw_params = data.get("parameters", {})
        if not isinstance(raw_params, Mapping):
            raise _reject("'parameters' must be a table", "parameters", source_text)
        parameters: dict[str, Any] = {}
        for name in raw_params:
            if name not in schema:
                raise _reject(f"unknown parameter {name!r} for experiment {experiment!r}", name, source_text)
        for name, (kind, default) in schema.items():
            value = raw_params.get(name, default)
            parameters[name] = _coerce(name, kind, value, source_text)

        output = data.get("output", {})
        if not isinstance(output, Mapping):
            raise _reject("'output' must be a table", "output", source_text)
        for key in output:
            if key not in OUTPUT_KEYS:
                raise _reject(f"unknown output key {key!r}", key, source_text)
        path = output.get("path")
        if path is not None and not isinstance(path, str):
            raise _reject("output path must be a string", "path", source_text)
        fmt = output.get("format", "csv")
        if fmt not in OUTPUT_FORMATS:
            raise _reject(f"output format must be one of {OUTPUT_FORMATS}, got {fmt!r}", "format", source_text)

        raw_grid = data.get("grid", {})
        if not isinstance(raw_grid, Mapping):
            raise _reject("'grid' must be a table", "grid", source_text)
        grid: dict[str, list[Any]] = {}
        for name, values in raw_grid.items():
            if name not in schema:
                raise _reject(f"unknown grid key {name!r} for experiment {experiment!r}", name, source_text)
            if not isinstance(values, list) or not values:
                raise _reject(f"grid entry {name!r} must be a non-empty list", name, source_text)
            kind = schema[name][0]
            grid[name] = [_coerce(name, kind, v, source_text) for v in values]

        return cls(experiment, parameters, seed, path, fmt, grid)

    def to_json(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "experiment": self.experiment,
            "seed": self.seed,
            "parameters": dict(self.parameters),
            "output": {"format": self.output_format},
        }
        if self.output_path is not None:
            payload["output"]["path"] = self.output_path
        if self.grid:
            payload["grid"] = {k: list(v) for k, v in self.grid.items()}
        return payload

    def canonical_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        """sha256 of the canonical JSON form."""
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()

    @property
    def grid_size(self) -> int:
        size = 1
        for values in self.grid.values():
            size *= len(values)
        return size

    def with_overrides(
        self,
        seed: int | None = None,
        output_path: str | None = None,
        output_format: str | None = None,
    ) -> "ExperimentConfig":
        """Apply command-line overrides (None keeps the file value)."""
        if seed is not None and not (0 <= seed < SEED_LIMIT):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}", key="seed")
        if output_format is not None and output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}", key="format")
        return replace(
            self,
            seed=self.seed if seed is None else seed,
            output_path=self.output_path if output_path is None else output_path,
            output_format=self.output_format if output_format is None else output_format,
        )

    def at_point(self, point: Mapping[str, Any]) -> "ExperimentConfig":
        """Single-run config with the grid values of one point substituted."""
        return replace(self, parameters={**self.parameters, **point}, grid={})


def parse_config_text(text: str, fmt: str = "toml") -> ExperimentConfig:
    """Parse TOML or JSON text into a resolved config."""
    try:
        data = json.loads(text) if fmt == "json" else tomllib.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(f"cannot parse {fmt} config: {exc}", line=line) from exc
    if not isinstance(data, Mapping):
        raise ConfigError("configuration must be a table at the top level")
    return ExperimentConfig.from_mapping(data, source_text=text)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a .toml or .json config file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    return parse_config_text(text, "json" if p.suffix.lower() == ".json" else "toml")
