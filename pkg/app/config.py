# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.


import os
import logging
from dotenv import load_dotenv

load_dotenv(override=False)

APP_VERSION = "1.0.0"

try:
    THREADS = int(os.getenv("KRYLAB_THREADS", str(os.cpu_count() or 1)))
except (ValueError, TypeError):
    THREADS = os.cpu_count() or 1

LOG_LEVEL = (os.getenv("KRYLAB_LOG_LEVEL") or "INFO").upper()
OUT_DIR = os.getenv("KRYLAB_OUT_DIR") or "results"

try:
    REORTH_WINDOW = int(os.getenv("KRYLAB_REORTH_WINDOW", "64"))
except (ValueError, TypeError):
    REORTH_WINDOW = 64

try:
    API_MAX_N = int(os.getenv("KRYLAB_API_MAX_N", "400"))
except (ValueError, TypeError):
    API_MAX_N = 400

try:
    CACHE_TTL = int(os.getenv("KRYLAB_CACHE_TTL", "300"))
except (ValueError, TypeError):
    CACHE_TTL = 300


def resolve_threads(requested: int | None) -> int:
    """--threads beats KRYLAB_THREADS, which beats the CPU count."""
    if requested is not None and requested > 0:
        return requested
    return max(1, THREADS)


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
