import logging
import os

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CORS_ORIGINS = "http://localhost:5173,http://127.0.0.1:5173"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("%s=%r is not an integer, using %d", name, raw, default)
        return default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning("%s=%r is not a number, using %g", name, raw, default)
        return default


GRID_POINTS = max(3, _env_int("GAUSS_EOF_GRID_POINTS", 2000))
TOL_R = _env_float("GAUSS_EOF_TOL_R", 1e-10)
LOG_LEVEL = os.getenv("GAUSS_EOF_LOG_LEVEL", "WARNING").upper()
# HTTP-запросы пишут файлы только внутри этого каталога
RESULTS_DIR = os.getenv("GAUSS_EOF_RESULTS_DIR", "results")
CORS_ORIGINS = [
    origin.strip()
    for origin in os.getenv("GAUSS_EOF_CORS_ORIGINS", DEFAULT_CORS_ORIGINS).split(",")
    if origin.strip()
]


def max_workers() -> int:
    """Сколько потоков разрешено для сеток и ансамблей."""
    default = min(8, os.cpu_count() or 1)
    # читаем при каждом вызове: тесты и CLI меняют окружение на лету
    return max(1, _env_int("GAUSS_EOF_THREADS", default))
