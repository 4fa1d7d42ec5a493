import json
import logging
import os

import psutil

from src.errors import ConfigError

logger = logging.getLogger(__name__)

# --- Paths ---
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
RUN_LOGS_DIR = os.environ.get('HOGEOM_RUN_LOGS', os.path.join(PROJECT_ROOT, 'suite_logs'))
RUN_LOGS_FILE = os.path.join(RUN_LOGS_DIR, 'suite_logs.json')

# --- Harish-Chandra series ---
MAX_HEIGHT = 40
# auto escalation of the series height
SERIES_REL_TOL = 1e-9
HEIGHT_STEP = 20
MAX_SERIES_HEIGHT = 100
MAX_SERIES_POINTS = 20000
CHAMBER_MARGIN = 0.3
GENERICITY_TOL = 1e-10
REGULARIZE_EPS = 0.05

# --- Local Taylor series ---
TAYLOR_DEGREE = 28
MAX_TAYLOR_DEGREE = 30
MAX_TAYLOR_BASIS = 2000
TRUST_RADIUS = 0.8
# largest relative remainder accepted from a Taylor evaluation beyond TRUST_RADIUS
TAYLOR_FALLBACK_TOL = 1e-6
CONSISTENCY_TOL = 1e-10

# --- Special functions ---
POLE_TOL = 1e-9
SERIES_TOL = 1e-16
SERIES_MAX_TERMS = 100000
QUAD_LEVEL = 7
CLOSED_FORM_TOL = 1e-8

# --- Verification ---
FD_STEP = 1e-3
SUITE_SLACK = 1e-9
POSITIVITY_FLOOR = 1e-12
UNBOUNDED_THRESHOLD = 10.0
SHARP_WINDOW = 100.0

# --- Output ---
SCHEMA_VERSION = 1
FLOAT_DIGITS = 17
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def thread_count():
    """Worker count for grid evaluation: HOGEOM_THREADS, else the machine's CPU count."""
    raw = os.environ.get('HOGEOM_THREADS')
    if raw is None or raw.strip() == '':
        return psutil.cpu_count(logical=True) or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"HOGEOM_THREADS must be a positive integer, got {raw!r}", value=raw)
    if value < 1:
        raise ConfigError(f"HOGEOM_THREADS must be a positive integer, got {raw!r}", value=raw)
    return value


def load_job_config(path):
    """Reads a JSON job file. Missing schema_version means the current one."""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}", path=path)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file is not valid JSON: {e}", path=path)
    if not isinstance(data, dict):
        raise ConfigError("Config file must contain a JSON object", path=path)
    version = data.get('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"Unsupported schema_version {version}, expected {SCHEMA_VERSION}",
                          path=path, schema_version=version)
    data['schema_version'] = SCHEMA_VERSION
    return data


def setup_logging(level=None):
    level = level or os.environ.get('HOGEOM_LOG_LEVEL', 'WARNING')
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level {level!r}", level=level)
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)
    logger.debug("Logging configured at %s", logging.getLevelName(numeric))
