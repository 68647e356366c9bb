"""On-disk JSON cache for per-k derived data (bases, relations, echelon forms).

Location precedence: explicit directory argument, then the GC_CACHE
environment variable, then ~/.cache/trivalent.  Files carry a format_version
and are ignored on mismatch, so stale caches degrade to recomputation.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

FORMAT_VERSION = 1

KINDS = ("basis", "zeros", "relations", "rref")


def default_dir() -> Path:
    env = os.environ.get("GC_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "trivalent"


class Cache:
    def __init__(self, directory=None, enabled: bool = True):
        self.enabled = enabled
        self.directory = Path(directory) if directory else default_dir()

    def path(self, k: int, kind: str) -> Path:
        assert kind in KINDS
        return self.directory / f"{kind}-k{k}.json"

    def load(self, k: int, kind: str):
        if not self.enabled:
            return None
        p = self.path(k, kind)
        try:
            with open(p) as f:
                data = json.load(f)
        except (OSError, ValueError):
            return None
        if data.get("format_version") != FORMAT_VERSION:
            return None
        return data.get("payload")

    def store(self, k: int, kind: str, payload) -> None:
        if not self.enabled:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        p = self.path(k, kind)
        tmp = p.with_suffix(".tmp")
        with open(tmp, "w") as f:
            json.dump({"format_version": FORMAT_VERSION, "payload": payload}, f)
        os.replace(tmp, p)

    def status(self):
        """Sorted (filename, size in bytes) pairs for present cache files."""
        if not self.directory.is_dir():
            return []
        out = []
        for p in sorted(self.directory.iterdir()):
            if p.suffix == ".json":
                out.append((p.name, p.stat().st_size))
        return out

    def clear(self) -> int:
        removed = 0
        if self.directory.is_dir():
            for p in list(self.directory.iterdir()):
                if p.suffix == ".json":
                    p.unlink()
                    removed += 1
        return removed
