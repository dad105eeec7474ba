"""Content-addressed on-disk cache.

Entries live under ``<root>/<namespace>/<key[:2]>/<key>``. Keys are hashes
of the inputs (group tables and parameters), so a stale entry can only be
hit by identical input. Writes go through a temp file and an atomic rename.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

_MAGIC = b"IDLB"
_active: "Cache | None" = None


def make_key(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, bytes):
            h.update(p)
        else:
            h.update(str(p).encode())
        h.update(b"\x00")
    return h.hexdigest()


class Cache:
    def __init__(self, root):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, namespace: str, key: str) -> Path:
        return self.root / namespace / key[:2] / key

    def _write(self, path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _read(self, path: Path) -> bytes | None:
        try:
            data = path.read_bytes()
        except OSError:
            self.misses += 1
            return None
        self.hits += 1
        return data

    def get_array(self, namespace: str, key: str) -> np.ndarray | None:
        """Integer matrix stored as magic, rows, cols, then int32 data."""
        data = self._read(self._path(namespace, key))
        if data is None:
            return None
        if data[:4] != _MAGIC or len(data) < 20 or (len(data) - 20) % 4:
            self.hits -= 1
            self.misses += 1
            return None
        rows, cols = struct.unpack("<QQ", data[4:20])
        arr = np.frombuffer(data, dtype="<i4", offset=20)
        if arr.size != rows * cols:
            self.hits -= 1
            self.misses += 1
            return None
        return arr.reshape(rows, cols).astype(np.int64)

    def put_array(self, namespace: str, key: str, arr: np.ndarray) -> None:
        arr = np.asarray(arr)
        if arr.ndim == 1:
            arr = arr[None, :]
        head = _MAGIC + struct.pack("<QQ", arr.shape[0], arr.shape[1])
        self._write(self._path(namespace, key), head + arr.astype("<i4").tobytes())

    def get_json(self, namespace: str, key: str):
        data = self._read(self._path(namespace, key))
        if data is None:
            return None
        try:
            return json.loads(data.decode())
        except ValueError:
            return None

    def put_json(self, namespace: str, key: str, value) -> None:
        self._write(self._path(namespace, key), json.dumps(value, sort_keys=True).encode())


def set_active_cache(cache: Cache | None) -> None:
    global _active
    _active = cache


def active_cache() -> Cache | None:
    return _active


def default_cache_dir() -> Path:
    return Path(os.environ.get("IDEMLAB_CACHE", ".idemlab-cache"))
