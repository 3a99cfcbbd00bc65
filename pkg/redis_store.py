import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)

KEY_PREFIX = "barefree:classification:"


def _get_redis_client(url: Optional[str] = None):
    url = url or os.getenv("BAREFREE_REDIS_URL", "").strip()
    if not url:
        return None
    try:
        import redis
    except Exception as e:
        logger.warning(f"Redis client not available: {e}")
        return None

    try:
        return redis.Redis.from_url(url, decode_responses=True)
    except Exception as e:
        logger.warning(f"Failed to connect to Redis at {url}: {e}")
        return None


def save_classification_text(fingerprint: str, text: str, url: Optional[str] = None) -> bool:
    r = _get_redis_client(url)
    if not r:
        return False
    try:
        r.set(f"{KEY_PREFIX}{fingerprint}", text)
        return True
    except Exception as e:
        logger.warning(f"Failed to save classification to Redis: {e}")
        return False


def load_classification_text(fingerprint: str, url: Optional[str] = None) -> Optional[str]:
    r = _get_redis_client(url)
    if not r:
        return None
    try:
        return r.get(f"{KEY_PREFIX}{fingerprint}") or None
    except Exception as e:
        logger.warning(f"Failed to load classification from Redis: {e}")
        return None
