import logging

import pytest
from pydantic import ValidationError

from config import ToolkitSettings, load_settings

logging.basicConfig(level=logging.INFO)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("BAREFREE_JOBS", "BAREFREE_SPLIT_DEPTH", "BAREFREE_CACHE_DIR", "BAREFREE_REDIS_URL"):
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    settings = load_settings()
    assert settings.jobs >= 1
    assert settings.split_depth == 12
    assert settings.witness_limit == 3
    assert settings.construct_max_len == 200
    assert settings.search_bounds["del_cube"] == 40
    assert settings.quick_del_cube_bound == 36
    assert settings.cache_dir is None


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("BAREFREE_JOBS", "3")
    monkeypatch.setenv("BAREFREE_SPLIT_DEPTH", " 9 ")
    monkeypatch.setenv("BAREFREE_CACHE_DIR", "/tmp/barefree")
    monkeypatch.setenv("BAREFREE_REDIS_URL", "redis://localhost:6379/1")
    settings = load_settings()
    assert settings.jobs == 3
    assert settings.split_depth == 9
    assert settings.cache_dir == "/tmp/barefree"
    assert settings.redis_url == "redis://localhost:6379/1"


def test_explicit_overrides_win(monkeypatch):
    monkeypatch.setenv("BAREFREE_JOBS", "3")
    assert load_settings(jobs=1).jobs == 1
    assert load_settings(jobs=None).jobs == 3


def test_invalid_values(monkeypatch):
    monkeypatch.setenv("BAREFREE_JOBS", "lots")
    with pytest.raises(ValueError):
        load_settings()
    monkeypatch.setenv("BAREFREE_JOBS", "0")
    with pytest.raises(ValidationError):
        load_settings()
    with pytest.raises(ValidationError):
        ToolkitSettings(witness_limit=-1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
