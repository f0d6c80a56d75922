import logging
import os

from dotenv import load_dotenv

from realwdvv.errors import ConfigurationError

load_dotenv()

# Raw strings; the CLI parses them like command-line values, so a bad
# environment value is reported as a usage error.
DEFAULT_MAX_DEGREE = os.getenv("REALWDVV_MAX_DEGREE", "3")
DEFAULT_SEED = os.getenv("REALWDVV_SEED", "+1")
DEFAULT_TARGET = os.getenv("REALWDVV_TARGET", "p3")
DEFAULT_CACHE = os.getenv("REALWDVV_CACHE") or None
DEFAULT_PDE_T_CAP = os.getenv("REALWDVV_PDE_T_CAP", "0")  # 0 means 2 * max degree
LOG_LEVEL = os.getenv("REALWDVV_LOG_LEVEL", "WARNING")

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def parse_seed(raw: str) -> int:
    """Accept the OSpin seed spellings +1, 1 and -1."""
    value = str(raw).strip()
    if value in ("+1", "1"):
        return 1
    if value == "-1":
        return -1
    raise ConfigurationError(f"seed must be +1 or -1, got {raw!r}")


def parse_degree(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"degree must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigurationError(f"degree must be at least 1, got {value}")
    return value


def configure_logging(level: str | int | None = None) -> None:
    """Install a single stream handler on the package logger."""
    chosen = level if level is not None else LOG_LEVEL
    if isinstance(chosen, str):
        numeric = logging.getLevelName(chosen.upper())
        if not isinstance(numeric, int):
            raise ConfigurationError(f"unknown log level {chosen!r}")
        chosen = numeric

    logger = logging.getLogger("realwdvv")
    logger.setLevel(chosen)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
        logger.addHandler(handler)
