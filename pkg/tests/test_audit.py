import os
import sys

import orjson
import pytest
from loguru import logger

from src.audit.logger import configure_logging
from src.audit.store import SCHEMA, CacheStore


@pytest.fixture(name="store")
def store_fixture(tmp_path):
    return CacheStore(str(tmp_path))


def test_write_once_keeps_first_value(store):
    """A key already on disk is never overwritten."""
    assert store.write_once("table.json", "values", {"a": 1, "b": 2}) == 2
    assert store.write_once("table.json", "values", {"a": 9, "c": 3}) == 1
    assert store.read("table.json", "values") == {"a": 1, "b": 2, "c": 3}


def test_heilbronn_round_trip(store):
    """Matrices come back as tuples; a missing level reads as None."""
    assert store.load_heilbronn(3) is None
    store.save_heilbronn(3, [(1, 0, 0, 3), (3, 0, 0, 1)])
    assert store.load_heilbronn(3) == [(1, 0, 0, 3), (3, 0, 0, 1)]


def test_foreign_schema_and_garbage_are_ignored(store, tmp_path):
    """Documents with another schema or invalid JSON read as empty."""
    path = os.path.join(str(tmp_path), "bernoulli.json")
    with open(path, "wb") as fh:
        fh.write(orjson.dumps({"schema": SCHEMA + 1, "bernoulli": {"2": ["1", "6"]}}))
    assert store.load_bernoulli() == {}
    with open(path, "wb") as fh:
        fh.write(b"{not json")
    assert store.load_bernoulli() == {}


def test_disabled_store_is_inert():
    """Without a root nothing is read or written."""
    store = CacheStore(None)
    assert store.write_once("x.json", "s", {"k": 1}) == 0
    assert store.read("x.json", "s") == {}


def test_logs_are_json_lines_with_bound_context(capsys):
    """The serialized sink carries the bound event name."""
    try:
        configure_logging("DEBUG")
        logger.bind(event="sample", p=5).debug("hello")
        line = capsys.readouterr().err.strip().splitlines()[-1]
        record = orjson.loads(line)["record"]
        assert record["message"] == "hello"
        assert record["extra"] == {"event": "sample", "p": 5}
    finally:
        logger.remove()
        logger.add(sys.__stderr__, level="INFO")
