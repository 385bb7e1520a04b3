"""On-disk cache of Kloosterman tables and global power sums.

Each entry is a gzip-compressed JSON document.  Large integer arrays are
stored as base64 of little-endian int64 bytes, or as decimal strings when
they exceed int64.  A SHA-256 checksum covers
the canonical serialization of every other field, and writes go through a
temporary file plus an atomic rename.
"""

from __future__ import annotations

import base64
import gzip
import hashlib
import json
import os
import tempfile
import zlib
from pathlib import Path

import numpy as np

from .fields import FieldDescriptor
from .kloosterman import KloostermanTable

__all__ = ["SCHEMA_VERSION", "CacheError", "ChecksumError", "SchemaVersionError", "DiskCache"]

SCHEMA_VERSION = 1


class CacheError(RuntimeError):
    pass


class ChecksumError(CacheError):
    pass


class SchemaVersionError(CacheError):
    pass


def _canonical(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def _checksum(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "checksum"}
    return hashlib.sha256(_canonical(body)).hexdigest()


def _encode(arr: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(arr, dtype="<i8").tobytes()).decode()


def _decode(text: str, shape: list[int]) -> np.ndarray:
    return np.frombuffer(base64.b64decode(text), dtype="<i8").reshape(shape).astype(np.int64)


class DiskCache:
    """Implements the table-store protocol used by :class:`klsym.tower.KloostermanTower`."""

    def __init__(self, root: str | os.PathLike = ".klcache", schema_version: int = SCHEMA_VERSION):
        self.root = Path(root)
        self.schema_version = schema_version
        self.hits = 0
        self.misses = 0

    # -- file plumbing ------------------------------------------------------

    def _write(self, path: Path, doc: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        doc = dict(doc, schema_version=self.schema_version)
        doc["checksum"] = _checksum(doc)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".gz")
        try:
            with os.fdopen(fd, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", compresslevel=1, mtime=0) as gz:
                gz.write(_canonical(doc))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _read(self, path: Path) -> dict | None:
        if not path.exists():
            return None
        try:
            with gzip.open(path, "rb") as gz:
                doc = json.loads(gz.read())
        except (OSError, EOFError, zlib.error, json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ChecksumError(f"{path} is corrupted: {exc}") from exc
        version = doc.get("schema_version")
        if version != self.schema_version:
            raise SchemaVersionError(f"{path} has schema version {version}, expected {self.schema_version}")
        if doc.get("checksum") != _checksum(doc):
            raise ChecksumError(f"checksum mismatch in {path}")
        return doc

    @staticmethod
    def _modulus_tag(modulus) -> str:
        return hashlib.sha256(",".join(map(str, modulus)).encode()).hexdigest()[:12]

    def table_path(self, field: FieldDescriptor, n: int, base_a: int, ext_degree: int) -> Path:
        tag = self._modulus_tag(field.modulus)
        return self.root / f"kl_p{field.p}_a{base_a}_m{ext_degree}_n{n}_{tag}.json.gz"

    # -- Kloosterman tables -------------------------------------------------

    def store(self, table: KloostermanTable, ext_degree: int) -> Path:
        field = table.field
        path = self.table_path(field, table.n, table.base_a, ext_degree)
        doc = {
            "kind": "kloosterman_table",
            "p": field.p,
            "a": table.base_a,
            "ext_degree": ext_degree,
            "n": table.n,
            "modulus": list(field.modulus),
            "generator": list(field.coeffs(field.generator)),
            "method": table.method,
            "shape": list(table.coords.shape),
            "keys": _encode(field.exp_table),
        }
        if table.coords.dtype == object:
            # coordinates beyond int64 are kept as decimal strings
            doc["values_dec"] = [str(v) for v in table.coords.ravel()]
        else:
            doc["values"] = _encode(table.coords)
        self._write(path, doc)
        return path

    def load(self, field: FieldDescriptor, n: int, base_a: int, ext_degree: int) -> KloostermanTable | None:
        path = self.table_path(field, n, base_a, ext_degree)
        doc = self._read(path)
        if doc is None:
            self.misses += 1
            return None
        expect = (field.p, base_a, ext_degree, n, list(field.modulus), list(field.coeffs(field.generator)))
        found = (doc["p"], doc["a"], doc["ext_degree"], doc["n"], doc["modulus"], doc["generator"])
        if expect != found:
            raise CacheError(f"{path} describes a different table")
        keys = _decode(doc["keys"], [doc["shape"][0]])
        if not np.array_equal(keys, field.exp_table):
            raise CacheError(f"{path} uses a different element ordering")
        self.hits += 1
        if "values_dec" in doc:
            values = np.array([int(v) for v in doc["values_dec"]], dtype=object).reshape(doc["shape"])
        else:
            values = _decode(doc["values"], doc["shape"])
        return KloostermanTable(field, n, base_a, values, doc["method"])

    # -- power sums ---------------------------------------------------------

    def power_sum_path(self, p: int, a: int, n: int, m: int) -> Path:
        return self.root / f"ps_p{p}_a{a}_n{n}_m{m}.json.gz"

    def store_power_sums(self, p: int, a: int, n: int, m: int, values: list[int]) -> Path:
        path = self.power_sum_path(p, a, n, m)
        doc = {"kind": "power_sums", "p": p, "a": a, "n": n, "m": m, "values": [str(v) for v in values]}
        self._write(path, doc)
        return path

    def load_power_sums(self, p: int, a: int, n: int, m: int) -> list[int] | None:
        doc = self._read(self.power_sum_path(p, a, n, m))
        if doc is None:
            return None
        return [int(v) for v in doc["values"]]
