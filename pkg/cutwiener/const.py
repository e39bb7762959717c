"""Constants and environment helpers shared across cutwiener."""

import logging
import os

import numpy as np

_LOGGER = logging.getLogger(__name__)

DOMAIN = "cutwiener"

# Environment variable capping the worker pool used for per-source BFS chunks
# and per-quotient index terms. Read once per pool, not cached, so tests can
# monkeypatch it.
ENV_THREADS = "CUTWIENER_THREADS"
DEFAULT_MAX_WORKERS = 4

# Hop distances are stored as int32. Unreachable pairs carry the maximum int32
# value and never take part in arithmetic: every index computation checks
# connectivity first and raises ``Disconnected`` instead.
DISTANCE_DTYPE = np.int32
UNREACHABLE = int(np.iinfo(np.int32).max)

# Largest magnitude an int64 accumulator may reach before the exact path falls
# back to arbitrary-precision (object dtype) arithmetic. Kept one bit below the
# int64 limit so the halving step of a double sum never sees an overflowed
# intermediate.
INT64_SAFE_BOUND = 2**62

# Relative tolerance for comparing float-mode results. Integer mode compares
# exactly.
FLOAT_REL_TOL = 1e-9

# Edge-list ingestion format. A line holding exactly this marker starts the
# optional per-vertex weight section; any other ``#`` starts a comment.
VERTEX_WEIGHTS_MARKER = "#vertex-weights"
COMMENT_CHAR = "#"
DEFAULT_WEIGHT = 1

# Process exit codes.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_GRAPH = 4
EXIT_MISMATCH = 5

# Computation methods. ``all`` runs every one of them and compares.
METHOD_DIRECT = "direct"
METHOD_CUT = "cut"
METHOD_ORACLE = "oracle"
METHOD_ALL = "all"
METHODS = (METHOD_DIRECT, METHOD_CUT, METHOD_ORACLE, METHOD_ALL)

# ``IndexReport.method`` names the oracle by what it does.
REPORT_METHOD_ORACLE = "line_graph_oracle"

# Partition sources for the cut method.
PARTITION_THETA_STAR = "theta_star"
PARTITION_FILE = "file"
PARTITION_SINGLE_CLASS = "single_class"
PARTITION_SOURCES = (
    PARTITION_THETA_STAR,
    PARTITION_FILE,
    PARTITION_SINGLE_CLASS,
)

# Index selection (CLI ``--index``) and the JSON keys each one is reported as.
INDEX_KEYS = {
    "w": "W",
    "we": "We",
    "wehat": "WeHat",
    "wve": "Wve",
}
INDEX_ALL = "all"

EXACTNESS_INTEGER = "integer"
EXACTNESS_FLOAT = "float"

FORMAT_JSON = "json"
FORMAT_TEXT = "text"


def default_worker_count() -> int:
    """Return the worker count used when ``CUTWIENER_THREADS`` is unset."""
    return max(1, min(DEFAULT_MAX_WORKERS, os.cpu_count() or 1))


def worker_count() -> int:
    """Return the worker cap from ``CUTWIENER_THREADS``, or the default.

    A value that is not a positive integer is reported once per call and
    ignored rather than raised: the variable only tunes throughput, so a typo in
    it must not change a result or abort a run.
    """
    raw = os.environ.get(ENV_THREADS)
    if raw is None:
        return default_worker_count()
    try:
        value = int(raw.strip())
    except ValueError:
        value = 0
    if value < 1:
        _LOGGER.warning(
            "Ignoring %s=%r: expected a positive integer, using %d workers",
            ENV_THREADS,
            raw,
            default_worker_count(),
        )
        return default_worker_count()
    return value


def selected_index_keys(selection: str) -> tuple[str, ...]:
    """Map a CLI ``--index`` choice to the report keys it selects."""
    if selection == INDEX_ALL:
        return tuple(INDEX_KEYS.values())
    return (INDEX_KEYS[selection],)
