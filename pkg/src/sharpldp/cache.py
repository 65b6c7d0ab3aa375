"""Content-addressed result cache with integrity checksums."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Callable

from . import __version__
from .errors import ConsistencyError


def cache_key(kind: str, payload: dict) -> str:
    """Key over kind, tool version and the canonical JSON of ``payload``."""
    text = json.dumps({"kind": kind, "version": __version__, "payload": payload},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class RunCache:
    """Directory of ``<key>.bin`` blobs with ``<key>.json`` metadata.

    With ``verify`` every hit is recomputed and compared byte for byte; a
    checksum or content mismatch raises :class:`ConsistencyError` naming
    the entry.
    """

    def __init__(self, directory, verify: bool = False):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.verify = verify
        self.hits = 0
        self.misses = 0

    def _paths(self, key: str) -> tuple[Path, Path]:
        return self.directory / f"{key}.bin", self.directory / f"{key}.json"

    def get(self, key: str) -> bytes | None:
        blob, meta = self._paths(key)
        if not blob.exists() or not meta.exists():
            return None
        data = blob.read_bytes()
        info = json.loads(meta.read_text())
        if hashlib.sha256(data).hexdigest() != info.get("sha256"):
            raise ConsistencyError(f"cache entry {blob.name} ({info.get('kind', '?')}) fails its checksum")
        return data

    def put(self, key: str, kind: str, data: bytes, describe: dict | None = None) -> None:
        blob, meta = self._paths(key)
        tmp = blob.with_suffix(".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, blob)
        info = {"kind": kind, "sha256": hashlib.sha256(data).hexdigest(), "size": len(data),
                "describe": describe or {}}
        meta.write_text(json.dumps(info, sort_keys=True, indent=1) + "\n")

    def fetch(self, key: str, kind: str, compute: Callable[[], bytes], describe: dict | None = None) -> bytes:
        """Return the cached bytes for ``key``, computing and storing them on a miss."""
        data = self.get(key)
        if data is None:
            self.misses += 1
            data = compute()
            self.put(key, kind, data, describe)
            return data
        self.hits += 1
        if self.verify:
            fresh = compute()
            if fresh != data:
                raise ConsistencyError(f"cache entry {key}.bin ({kind}) differs from recomputation")
        return data

    def verify_all(self) -> list[str]:
        """Names of entries whose checksum fails."""
        bad = []
        for meta in sorted(self.directory.glob("*.json")):
            blob = meta.with_suffix(".bin")
            info = json.loads(meta.read_text())
            if not blob.exists() or hashlib.sha256(blob.read_bytes()).hexdigest() != info.get("sha256"):
                bad.append(blob.name)
        return bad
