"""
Shared SparkSession utilities for parallel ensembles and sweeps.

Spark is the execution backend for anything embarrassingly parallel in this
project: grid points of a sweep, chunks of a trajectory ensemble, trials of a
property sweep. Sessions are local (``local[n]``) and created lazily, only
when a caller asks for more than one worker.

Logging is configured via conf/log4j2.properties to:
- Write INFO logs to .logs/spark.log
- Only show ERROR on console (keeping experiment output clean)
"""

import logging
import os
from pathlib import Path

from pyspark import SparkContext
from pyspark.sql import SparkSession

logger = logging.getLogger(__name__)

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Path to log4j2 config
LOG4J2_CONFIG = PROJECT_ROOT / "conf" / "log4j2.properties"

# Base application name prefix for all Spark sessions
# Final app name will be: APP_NAME_PREFIX-<experiment_name>
APP_NAME_PREFIX = "MaxwellDemon"


def _ensure_logs_dir() -> None:
    """Ensure .logs directory exists."""
    logs_dir = PROJECT_ROOT / ".logs"
    logs_dir.mkdir(exist_ok=True)


def _snake_to_title(snake_str: str) -> str:
    """
    Convert snake_case string to TitleCase.

    Examples:
        reeb_wolf -> ReebWolf
        quantum_szilard_limits -> QuantumSzilardLimits
    """
    return "".join(word.capitalize() for word in snake_str.split("_"))


def _parse_script_identifier(script_id: str | None) -> str | None:
    """
    Parse a script identifier, which can be either a file path or a name.

    File paths (containing / or ending with .py) are reduced to their stem
    and converted from snake_case to TitleCase; experiment names such as
    ``reeb_wolf`` are converted the same way.
    """
    if script_id is None:
        return None

    if "/" in script_id or script_id.endswith(".py"):
        return _snake_to_title(Path(script_id).stem)

    if "_" in script_id:
        return _snake_to_title(script_id)

    return script_id


def _build_app_name(script_name: str | None = None) -> str:
    """Build the full application name, e.g. ``MaxwellDemon-ReebWolf``."""
    if script_name:
        return f"{APP_NAME_PREFIX}-{script_name}"
    return APP_NAME_PREFIX


def local_master(threads: int) -> str:
    """Spark master URL for a local pool of ``threads`` workers."""
    return f"local[{max(1, threads)}]"


def _worker_pythonpath() -> str:
    """PYTHONPATH for Python workers: the project root first, so ``src.*`` imports resolve."""
    inherited = os.environ.get("PYTHONPATH", "")
    return os.pathsep.join(p for p in (str(PROJECT_ROOT), inherited) if p)


def create_spark_session(
    script_name: str | None = None,
    master: str = "local[*]",
) -> SparkSession:
    """
    Create (or reuse) a local SparkSession for ensemble work.

    Tasks are numpy kernels shipped by ``parallel_map``, so the session skips
    SQL tuning and instead pins default parallelism to the worker count,
    reuses Python workers between tasks and exports the project root to them.
    A session that is already running is reused as is; its master wins.

    Args:
        script_name: Identifier for this run. Either a file path like __file__
                     or an experiment name like "reeb_wolf".
        master: Spark master URL (default: local[*])

    Returns:
        Configured SparkSession instance
    """
    _ensure_logs_dir()

    app_name = _build_app_name(_parse_script_identifier(script_name))
    active = SparkSession.getActiveSession()
    if active is not None:
        running = active.sparkContext.master
        if running != master:
            logger.warning("reusing spark session on %s (requested %s)", running, master)
        return active

    logger.info("starting spark session %s on %s", app_name, master)

    # log4j resolves .logs/ relative to the working directory
    original_cwd = os.getcwd()
    os.chdir(PROJECT_ROOT)

    try:
        builder = (
            SparkSession.builder.appName(app_name)
            .master(master)
            .config("spark.executorEnv.PYTHONPATH", _worker_pythonpath())
            .config("spark.python.worker.reuse", "true")
            .config("spark.driver.memory", "2g")
            .config("spark.ui.enabled", "false")
            .config("spark.ui.showConsoleProgress", "false")
        )
        parallelism = _local_parallelism(master)
        if parallelism is not None:
            builder = builder.config("spark.default.parallelism", str(parallelism))

        if LOG4J2_CONFIG.exists():
            builder = builder.config(
                "spark.driver.extraJavaOptions",
                f"-Dlog4j.configurationFile=file:{LOG4J2_CONFIG}",
            )

        spark = builder.getOrCreate()
        spark.sparkContext.setLogLevel("ERROR")

        return spark
    finally:
        os.chdir(original_cwd)


def _local_parallelism(master: str) -> int | None:
    """Worker count of a ``local[n]`` master; None for ``local[*]`` and remote masters."""
    if master.startswith("local[") and master.endswith("]"):
        inner = master[len("local[") : -1]
        return int(inner) if inner.isdigit() else None
    return None


def get_spark_context(script_name: str | None = None, threads: int | None = None) -> SparkContext:
    """
    Get a SparkContext, optionally pinned to a local pool of ``threads`` workers.

    Args:
        script_name: Identifier for this run (file path or experiment name)
        threads: Number of local workers; None uses every core

    Returns:
        SparkContext instance
    """
    master = "local[*]" if threads is None else local_master(threads)
    return create_spark_session(script_name, master=master).sparkContext
