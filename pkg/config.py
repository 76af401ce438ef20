# config.py
# sparsebench settings, read from the environment (.env supported)

import logging
import logging.handlers
import sys
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Simulation defaults
DEFAULT_BUDGET_SECONDS = float(os.getenv("SPARSEBENCH_BUDGET_SECONDS", "180"))
DEFAULT_REPS = int(os.getenv("SPARSEBENCH_REPS", "10"))
OUTPUT_DIR = Path(os.getenv("SPARSEBENCH_OUTPUT_DIR", "results"))

# API Configuration
API_HOST = os.getenv("API_HOST", "127.0.0.1")
API_PORT = int(os.getenv("API_PORT", "8000"))

# Logging Configuration
LOG_LEVEL = getattr(logging, os.getenv("LOG_LEVEL", "INFO").upper(), logging.INFO)
ENABLE_FILE_LOGGING = os.getenv("ENABLE_FILE_LOGGING", "false").lower() == "true"
LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

LOGS_DIR = Path("logs")
LOG_FILE = LOGS_DIR / "sparsebench.log"
ERROR_LOG_FILE = LOGS_DIR / "sparsebench_errors.log"

# Third-party loggers kept at WARNING
QUIET_LOGGERS = ("httpx", "httpcore", "uvicorn.access")

# Stable method tokens used in every output
METHOD_TOKENS = ("lasso", "relaxo", "fs", "bs")


def get_thread_cap() -> int:
    """
    Worker cap for repetitions and Monte Carlo draws.

    Read from SPARSEBENCH_THREADS on every call so tests and long-lived
    processes see the current environment.
    """
    raw = os.getenv("SPARSEBENCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        get_logger(__name__).warning(f"⚠️ Ignoring invalid SPARSEBENCH_THREADS={raw!r}, using 1")
        return 1


def _rotating_handler(path: Path, level: int, megabytes: int, backups: int,
                      formatter: logging.Formatter) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(path, maxBytes=megabytes * 1024 * 1024, backupCount=backups)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def setup_logging(log_level: int = None, enable_file_logging: bool = None) -> logging.Logger:
    """
    Configure the "sparsebench" logger once.

    Records go to stderr, leaving stdout to the command line's result lines.
    With file logging on, everything also goes to logs/sparsebench.log and
    errors to logs/sparsebench_errors.log.
    """
    root = logging.getLogger("sparsebench")
    if root.handlers:
        return root

    level = LOG_LEVEL if log_level is None else log_level
    to_files = ENABLE_FILE_LOGGING if enable_file_logging is None else enable_file_logging
    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT)

    root.setLevel(logging.DEBUG if to_files else level)
    root.propagate = False

    stream = logging.StreamHandler(sys.stderr)
    stream.setLevel(level)
    stream.setFormatter(formatter)
    root.addHandler(stream)

    if to_files:
        LOGS_DIR.mkdir(exist_ok=True)
        root.addHandler(_rotating_handler(LOG_FILE, logging.DEBUG, 10, 5, formatter))
        root.addHandler(_rotating_handler(ERROR_LOG_FILE, logging.ERROR, 5, 3, formatter))

    for noisy in QUIET_LOGGERS:
        logging.getLogger(noisy).setLevel(logging.WARNING)
    return root


def get_logger(name: str = None) -> logging.Logger:
    """Child of the "sparsebench" logger, e.g. sparsebench.solvers.lasso for __name__."""
    if not name:
        return logging.getLogger("sparsebench")
    if name == "sparsebench" or name.startswith("sparsebench."):
        return logging.getLogger(name)
    return logging.getLogger(f"sparsebench.{name}")


def validate_config():
    """
    Check the environment-derived settings.

    Returns:
        tuple: (is_valid, error_message)
    """
    problems = []
    if DEFAULT_BUDGET_SECONDS < 0:
        problems.append(f"SPARSEBENCH_BUDGET_SECONDS must be >= 0, got {DEFAULT_BUDGET_SECONDS}")
    if DEFAULT_REPS < 1:
        problems.append(f"SPARSEBENCH_REPS must be >= 1, got {DEFAULT_REPS}")
    if not 0 < API_PORT < 65536:
        problems.append(f"API_PORT out of range: {API_PORT}")
    if problems:
        return False, "; ".join(problems)
    return True, None


def get_runtime_config():
    """
    Snapshot of the effective runtime configuration.

    Returns:
        dict: Configuration values as seen by this process
    """
    return {
        "threads": get_thread_cap(),
        "budget_seconds": DEFAULT_BUDGET_SECONDS,
        "reps": DEFAULT_REPS,
        "output_dir": str(OUTPUT_DIR),
        "methods": list(METHOD_TOKENS),
        "api_host": API_HOST,
        "api_port": API_PORT,
    }


_root_logger = setup_logging()

_valid, _problem = validate_config()
if not _valid:
    _root_logger.error(f"❌ Configuration error: {_problem} (check your .env)")
