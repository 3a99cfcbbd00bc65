import logging
import os
from pathlib import Path
from typing import Callable, Optional, Union

from enumerator import (
    CacheError,
    LengthClassification,
    SearchSpec,
    StaleCacheError,
    classify,
    format_classification,
    parse_classification,
    save_classification,
    spec_fingerprint,
)
from redis_store import load_classification_text as load_classification_redis
from redis_store import save_classification_text as save_classification_redis

logger = logging.getLogger(__name__)

CACHE_SUFFIX = ".cache"


def cache_path_for(spec: SearchSpec, cache_dir: Union[str, Path]) -> Path:
    return Path(cache_dir) / f"{spec_fingerprint(spec)}{CACHE_SUFFIX}"


def load_cached(
    spec: SearchSpec, path: Optional[Union[str, Path]] = None, redis_url: Optional[str] = None
) -> Optional[LengthClassification]:
    """Load a classification from disk (preferred) or Redis. Missing entries give None."""
    if path is not None and os.path.exists(path):
        return parse_classification(Path(path).read_text(encoding="utf-8"), expected=spec)

    text = load_classification_redis(spec_fingerprint(spec), redis_url)
    if text:
        logger.info(f"Loaded classification {spec_fingerprint(spec)[:12]} from Redis")
        return parse_classification(text, expected=spec)
    return None


def store(c: LengthClassification, path: Optional[Union[str, Path]] = None, redis_url: Optional[str] = None) -> None:
    """Persist a classification to disk and mirror it to Redis."""
    save_classification_redis(spec_fingerprint(c.spec), format_classification(c), redis_url)
    if path is None:
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    save_classification(c, path)


def cached_classifier(
    jobs: int = 1,
    split_depth: int = 12,
    cache_dir: Optional[Union[str, Path]] = None,
    cache_file: Optional[Union[str, Path]] = None,
    redis_url: Optional[str] = None,
) -> Callable[[SearchSpec], LengthClassification]:
    """
    classify() behind the cache. Stale entries are logged, recomputed and
    overwritten. A corrupt explicit cache file is an error; corrupt entries in a
    cache directory are recomputed like stale ones.
    """

    def run(spec: SearchSpec) -> LengthClassification:
        path = cache_file or (cache_path_for(spec, cache_dir) if cache_dir else None)
        if path is not None or redis_url:
            try:
                cached = load_cached(spec, path, redis_url)
                if cached is not None:
                    logger.info(f"Using cached classification for {spec.property.label} {spec.kind.adjective}")
                    return cached
            except StaleCacheError as e:
                logger.warning(f"Recomputing stale cache entry: {e}")
            except CacheError as e:
                if cache_file is not None:
                    raise
                logger.warning(f"Ignoring cache entry: {e}")
        c = classify(spec, jobs=jobs, split_depth=split_depth)
        if path is not None or redis_url:
            store(c, path, redis_url)
        return c

    return run
