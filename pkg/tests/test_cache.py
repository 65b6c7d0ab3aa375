import pytest

from sharpldp.cache import RunCache, cache_key
from sharpldp.errors import ConsistencyError


def test_key_stable():
    assert cache_key("k", {"a": 1, "b": 2}) == cache_key("k", {"b": 2, "a": 1})
    assert cache_key("k", {"a": 1}) != cache_key("j", {"a": 1})


def test_fetch_and_verify(tmp_path):
    c = RunCache(tmp_path)
    calls = []
    compute = lambda: calls.append(1) or b"payload"
    assert c.fetch("x", "t", compute) == b"payload"
    assert c.fetch("x", "t", compute) == b"payload"
    assert (c.hits, c.misses, len(calls)) == (1, 1, 1)
    v = RunCache(tmp_path, verify=True)
    assert v.fetch("x", "t", compute) == b"payload" and len(calls) == 2
    with pytest.raises(ConsistencyError):
        v.fetch("x", "t", lambda: b"other")


def test_corruption(tmp_path):
    c = RunCache(tmp_path)
    c.put("y", "t", b"abc")
    (tmp_path / "y.bin").write_bytes(b"abd")
    assert c.verify_all() == ["y.bin"]
    with pytest.raises(ConsistencyError, match="y.bin"):
        c.get("y")
    assert c.get("missing") is None
