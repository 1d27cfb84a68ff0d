"""On-disk cache for serialized results.

Entries are files ``<key>.json`` holding the payload string and a checksum.
Keys hash the command, its parameters, the code version and the relation
data version, so a change in any of them is a miss.  Writes go through a
temporary file and ``os.replace`` under an exclusive ``fcntl`` lock.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

log = logging.getLogger(__name__)

ENV_VAR = "GWSS_CACHE_DIR"


def default_dir() -> Path:
    if os.environ.get(ENV_VAR):
        return Path(os.environ[ENV_VAR])
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "gwss"


def cache_key(command: str, params: dict, code_version: str, data_version: str) -> str:
    blob = json.dumps({"command": command, "params": params, "code": code_version,
                       "data": data_version}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _digest(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class CacheResult:
    payload: str
    hit: bool
    stored: bool
    seconds: float


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.dir = Path(directory) if directory is not None else default_dir()

    def path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def load(self, key: str) -> str | None:
        """Stored payload, or None if absent or corrupted (corrupt files are removed)."""
        p = self.path(key)
        try:
            entry = json.loads(p.read_text())
            payload = entry["payload"]
            if entry.get("key") != key or entry.get("sha256") != _digest(payload):
                raise ValueError("checksum mismatch")
            return payload
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("discarding corrupted cache entry %s: %s", p.name, exc)
            try:
                p.unlink()
            except OSError:
                pass
            return None

    def _store(self, key: str, payload: str) -> None:
        entry = {"key": key, "payload": payload, "sha256": _digest(payload),
                 "timestamp": time.time()}
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=f".{key}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get(self, key: str, compute: Callable[[], str]) -> CacheResult:
        start = time.perf_counter()
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
            lock = open(self.dir / f"{key}.lock", "a")
        except OSError as exc:
            log.warning("cache directory %s is not writable (%s); computing without cache", self.dir, exc)
            return CacheResult(compute(), False, False, time.perf_counter() - start)
        with lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            try:
                cached = self.load(key)
                if cached is not None:
                    return CacheResult(cached, True, False, time.perf_counter() - start)
                payload = compute()
                try:
                    self._store(key, payload)
                    stored = True
                except OSError as exc:
                    log.warning("could not write cache entry (%s)", exc)
                    stored = False
                return CacheResult(payload, False, stored, time.perf_counter() - start)
            finally:
                fcntl.flock(lock, fcntl.LOCK_UN)
