"""JSON-lines storage for linked identity records.

One serialized record per line, each carrying ``schema_version``, at
most one line per canonical address, lines sorted ascending by address
on commit. Canonical JSON (sorted keys, compact separators) makes
equal record sets produce byte-identical files. Wei amounts are decimal
strings so no consumer needs 64-bit-safe integers.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from pathlib import Path
from typing import Iterator, Sequence

from .address import AddressError, EthAddress, parse_address
from .pipeline import LinkedIdentity

__all__ = [
    "DuplicateAddress",
    "RecordStore",
    "SchemaVersionMismatch",
    "StoreError",
    "commit",
    "load",
]

SCHEMA_VERSION = 1


class StoreError(Exception):
    pass


class DuplicateAddress(StoreError):
    pass


class SchemaVersionMismatch(StoreError):
    pass


def canonicalize(address: EthAddress | str) -> EthAddress:
    """Case-insensitive address canonicalization for lookups."""
    if isinstance(address, EthAddress):
        return address
    return parse_address(address.lower())


class RecordStore:
    """Immutable, fully indexed in-memory view of a record set."""

    def __init__(self, records: Sequence[LinkedIdentity]) -> None:
        self._records = sorted(records, key=lambda r: r.address)
        self._by_address: dict[EthAddress, LinkedIdentity] = {}
        for record in self._records:
            if record.address in self._by_address:
                raise DuplicateAddress(f"duplicate record for {record.address.canonical}")
            self._by_address[record.address] = record

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[LinkedIdentity]:
        return iter(self._records)

    @property
    def records(self) -> list[LinkedIdentity]:
        return list(self._records)

    def get(self, address: EthAddress | str) -> LinkedIdentity | None:
        try:
            return self._by_address.get(canonicalize(address))
        except AddressError:
            return None

    def top_by_balance(self, n: int) -> list[LinkedIdentity]:
        """The ``n`` records with largest balance; records without chain
        activity rank as balance 0. Ties break ascending by address."""
        if n < 0:
            raise ValueError("n must be >= 0")
        ranked = sorted(
            self._records,
            key=lambda r: (-(r.activity.balance_wei if r.activity else 0), r.address),
        )
        return ranked[:n]

    def sample_random(self, n: int, seed: int) -> list[EthAddress]:
        """Deterministic sample of ``n`` distinct addresses for ``seed``."""
        if n < 0 or n > len(self._records):
            raise ValueError(f"sample size {n} out of range for store of {len(self._records)}")
        rng = random.Random(seed)
        return [r.address for r in rng.sample(self._records, n)]


def commit(records: Sequence[LinkedIdentity], path: str | Path) -> Path:
    """Atomically write the record set; returns the path written."""
    store = RecordStore(records)  # sorts + rejects duplicates
    path = Path(path)
    lines = []
    for record in store:
        doc = record.to_json_dict()
        doc["schema_version"] = SCHEMA_VERSION
        lines.append(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    payload = "".join(line + "\n" for line in lines)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def load(path: str | Path) -> RecordStore:
    """Parse a committed store file; no partial loads."""
    path = Path(path)
    documents = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StoreError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise SchemaVersionMismatch(
                f"{path}:{lineno}: schema_version {doc.get('schema_version')!r}, "
                f"expected {SCHEMA_VERSION}"
            )
        documents.append(doc)
    return RecordStore([LinkedIdentity.from_json_dict(doc) for doc in documents])
