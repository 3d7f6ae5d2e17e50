import logging
import os

from dotenv import load_dotenv

from sfec.errors import ConfigError

load_dotenv()

DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_CHUNK_BITS = 65536
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"


def _positive_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'") from None
    if value < 1:
        raise ConfigError(f"{name} must be >= 1, got {value}")
    return value


def sim_threads() -> int:
    """Worker cap for the BER simulator (SFEC_THREADS, defaults to the CPU count)."""
    return _positive_int("SFEC_THREADS", os.cpu_count() or 1)


def chunk_bits() -> int:
    """Target information bits per simulation work unit (SFEC_CHUNK_BITS)."""
    return _positive_int("SFEC_CHUNK_BITS", DEFAULT_CHUNK_BITS)


def log_level() -> int:
    name = os.environ.get("SFEC_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigError(f"SFEC_LOG_LEVEL '{name}' is not a logging level")
    return level
