import logging
from unittest.mock import MagicMock

import pytest

import cache_store
import redis_store
from cache_store import cache_path_for, cached_classifier, load_cached, store
from detect import RepetitionKind
from enumerator import CacheValidationError, SearchSpec, classify, format_classification
from props import PropertyKind

logging.basicConfig(level=logging.INFO)


def small_spec(max_len=10):
    return SearchSpec(
        alphabet=2,
        kind=RepetitionKind.OVERLAP,
        property=PropertyKind.delicate(),
        min_len=1,
        max_len=max_len,
    )


@pytest.fixture
def counting_classify(monkeypatch):
    calls = []

    def fake(spec, jobs=1, split_depth=12, monitor=None):
        calls.append(spec)
        return classify(spec, jobs=1)

    monkeypatch.setattr(cache_store, "classify", fake)
    return calls


@pytest.fixture(autouse=True)
def no_redis(monkeypatch):
    monkeypatch.delenv("BAREFREE_REDIS_URL", raising=False)


def test_directory_cache_reuses_results(tmp_path, counting_classify):
    run = cached_classifier(cache_dir=tmp_path)
    first = run(small_spec())
    second = run(small_spec())
    assert len(counting_classify) == 1
    assert second.counts == first.counts
    assert cache_path_for(small_spec(), tmp_path).exists()
    run(small_spec(11))
    assert len(counting_classify) == 2


def test_corrupt_directory_entry_is_recomputed(tmp_path, counting_classify):
    path = cache_path_for(small_spec(), tmp_path)
    path.write_text("garbage\n")
    c = cached_classifier(cache_dir=tmp_path)(small_spec())
    assert len(counting_classify) == 1
    assert c.admitted() == [7, 8, 9, 10]
    assert path.read_text() == format_classification(c)


def test_stale_cache_file_is_recomputed(tmp_path, counting_classify):
    path = tmp_path / "run.cache"
    cached_classifier(cache_file=path)(small_spec())
    c = cached_classifier(cache_file=path)(small_spec(11))
    assert len(counting_classify) == 2
    assert path.read_text() == format_classification(c)
    cached_classifier(cache_file=path)(small_spec(11))
    assert len(counting_classify) == 2


def test_tampered_cache_file_is_an_error(tmp_path, counting_classify):
    path = tmp_path / "run.cache"
    c = cached_classifier(cache_file=path)(small_spec(9))
    lines = path.read_text().splitlines()
    for i, line in enumerate(lines[1:], start=1):
        fields = line.split()
        if fields[0] == "7":
            fields[2] = "0000000"
            lines[i] = " ".join(fields)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CacheValidationError):
        cached_classifier(cache_file=path)(small_spec(9))
    assert c.counts[7] > 0


def test_without_cache_always_searches(counting_classify):
    run = cached_classifier()
    run(small_spec(8))
    run(small_spec(8))
    assert len(counting_classify) == 2


def test_redis_mirror(monkeypatch, counting_classify):
    saved = {}
    client = MagicMock()
    client.set.side_effect = lambda key, value: saved.__setitem__(key, value)
    client.get.side_effect = lambda key: saved.get(key)
    monkeypatch.setattr(redis_store, "_get_redis_client", lambda url=None: client)

    run = cached_classifier(redis_url="redis://localhost:6379/0")
    first = run(small_spec())
    assert len(saved) == 1
    key = next(iter(saved))
    assert key.startswith(redis_store.KEY_PREFIX)
    second = run(small_spec())
    assert len(counting_classify) == 1
    assert second.witnesses == first.witnesses


def test_redis_failures_are_not_fatal(monkeypatch):
    client = MagicMock()
    client.set.side_effect = ConnectionError("down")
    client.get.side_effect = ConnectionError("down")
    monkeypatch.setattr(redis_store, "_get_redis_client", lambda url=None: client)
    assert redis_store.save_classification_text("abc", "text") is False
    assert redis_store.load_classification_text("abc") is None


def test_redis_client_needs_url():
    assert redis_store._get_redis_client() is None


def test_store_and_load_cached(tmp_path):
    c = classify(small_spec(9))
    path = tmp_path / "nested" / "c.cache"
    store(c, path)
    assert load_cached(small_spec(9), path).counts == c.counts
    assert load_cached(small_spec(9), tmp_path / "absent.cache") is None


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
