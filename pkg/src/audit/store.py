"""
Write-once JSON cache on disk.

Layout under the cache root:
- bernoulli.json: {"schema": 1, "bernoulli": {k: [num, den]}}
- heilbronn/{l}.json: {"schema": 1, "heilbronn": {"matrices": [[a, b, c, d], ...]}}

A key is written at most once; files are replaced atomically so concurrent
readers always see a complete document.
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import os
import tempfile
import threading

import orjson
from loguru import logger

SCHEMA = 1

_lock = threading.Lock()


class CacheStore:
    def __init__(self, root: Optional[str]):
        self.root = root

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _path(self, relpath: str) -> str:
        return os.path.join(self.root, relpath)

    def read(self, relpath: str, section: str) -> Dict[str, Any]:
        if not self.enabled:
            return {}
        path = self._path(relpath)
        if not os.path.exists(path):
            return {}
        try:
            with open(path, "rb") as fh:
                doc = orjson.loads(fh.read())
        except (OSError, orjson.JSONDecodeError) as exc:
            logger.bind(event="cache_unreadable").warning(f"{path}: {exc}")
            return {}
        if doc.get("schema") != SCHEMA:
            logger.bind(event="cache_schema").warning(f"{path}: schema {doc.get('schema')} != {SCHEMA}, ignored")
            return {}
        return doc.get(section, {})

    def write_once(self, relpath: str, section: str, entries: Dict[str, Any]) -> int:
        """Merge entries whose keys are not present yet; returns how many were added."""
        if not self.enabled or not entries:
            return 0
        with _lock:
            current = self.read(relpath, section)
            fresh = {k: v for k, v in entries.items() if k not in current}
            if not fresh:
                return 0
            current.update(fresh)
            path = self._path(relpath)
            os.makedirs(os.path.dirname(path), exist_ok=True)
            payload = orjson.dumps({"schema": SCHEMA, section: current}, option=orjson.OPT_SORT_KEYS)
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(payload)
                os.replace(tmp, path)
            except OSError:
                if os.path.exists(tmp):
                    os.remove(tmp)
                raise
        logger.bind(event="cache_write", file=relpath).debug(f"{len(fresh)} new keys")
        return len(fresh)

    # bernoulli --------------------------------------------------------------

    def load_bernoulli(self) -> Dict[int, Fraction]:
        raw = self.read("bernoulli.json", "bernoulli")
        return {int(k): Fraction(int(v[0]), int(v[1])) for k, v in raw.items()}

    def save_bernoulli(self, table: Dict[int, Fraction]) -> int:
        entries = {str(k): [str(v.numerator), str(v.denominator)] for k, v in table.items()}
        return self.write_once("bernoulli.json", "bernoulli", entries)

    # heilbronn --------------------------------------------------------------

    def load_heilbronn(self, ell: int) -> Optional[List[Tuple[int, int, int, int]]]:
        raw = self.read(os.path.join("heilbronn", f"{ell}.json"), "heilbronn")
        if not raw:
            return None
        return [tuple(m) for m in raw["matrices"]]

    def save_heilbronn(self, ell: int, matrices: List[Tuple[int, int, int, int]]) -> int:
        return self.write_once(os.path.join("heilbronn", f"{ell}.json"), "heilbronn",
                               {"matrices": [list(m) for m in matrices]})
