import os
from pydantic import BaseModel, Field
from typing import Dict, Optional


def _default_jobs() -> int:
    return os.cpu_count() or 1


class ToolkitSettings(BaseModel):
    # Search
    jobs: int = Field(default_factory=_default_jobs, ge=1)
    split_depth: int = Field(12, ge=1)
    witness_limit: int = Field(3, ge=0)

    # Finite verification bounds
    binary_verify_limit: int = 1 << 14
    ternary_verify_limit: int = 10_000
    square_prefix_limit: int = 1 << 16
    position_check_limit: int = 10_000

    # Construction / classification bounds for `verify`
    construct_max_len: int = 200
    eid_levels: int = 3
    search_bounds: Dict[str, int] = Field(
        default_factory=lambda: {
            "irr_overlap": 32,
            "irr_cube": 30,
            "irr_square": 22,
            "del_square": 24,
            "del_overlap": 32,
            "del_cube": 40,
        }
    )
    quick_del_cube_bound: int = 36  # --quick cap for the delicate cubefree search

    # Cache
    cache_dir: Optional[str] = None
    redis_url: Optional[str] = None

    verbose: bool = False


def _env_int(name: str) -> Optional[int]:
    val = str(os.getenv(name, "")).strip()
    if not val:
        return None
    try:
        return int(val)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {val!r}")


def load_settings(**overrides) -> ToolkitSettings:
    """Defaults, then BAREFREE_* environment variables, then explicit overrides (CLI flags)."""
    values = {}
    jobs = _env_int("BAREFREE_JOBS")
    if jobs is not None:
        values["jobs"] = jobs
    split_depth = _env_int("BAREFREE_SPLIT_DEPTH")
    if split_depth is not None:
        values["split_depth"] = split_depth
    cache_dir = os.getenv("BAREFREE_CACHE_DIR", "").strip()
    if cache_dir:
        values["cache_dir"] = cache_dir
    redis_url = os.getenv("BAREFREE_REDIS_URL", "").strip()
    if redis_url:
        values["redis_url"] = redis_url
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ToolkitSettings(**values)
