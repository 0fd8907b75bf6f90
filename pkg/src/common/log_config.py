"""
Logging setup for scripts and the experiment runner.

Mirrors the Spark logging arrangement in conf/log4j2.properties:
- INFO records and above go to .logs/maxwell.log
- Only WARNING and above reach the console (keeping printed tables clean)

Library modules never configure logging themselves; they only call
logging.getLogger(__name__). Entry points call configure_logging() once.
"""

import logging
from pathlib import Path

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent

LOG_FILE = PROJECT_ROOT / ".logs" / "maxwell.log"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def configure_logging(console_level: int = logging.WARNING, log_file: Path | None = None) -> None:
    """Attach a file handler and a quiet console handler to the ``src`` logger tree.

    Calling it more than once is harmless; only the first call installs handlers.
    """
    global _configured
    if _configured:
        return

    path = log_file or LOG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)

    root = logging.getLogger("src")
    root.setLevel(logging.INFO)

    file_handler = logging.FileHandler(path, encoding="utf-8")
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    console = logging.StreamHandler()
    console.setLevel(console_level)
    console.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))

    root.addHandler(file_handler)
    root.addHandler(console)
    _configured = True
