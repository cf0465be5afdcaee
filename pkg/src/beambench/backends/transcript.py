"""Append-only transcript store: one JSON record per line.

The first line is a header carrying the manifest fingerprint; resuming a
batch into a store written under a different manifest is refused.  A
truncated final line (crash mid-append) is tolerated on load, so stored
records always equal completed invocations.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterator

from .base import BackendResponse, Failure

FORMAT = "beambench-transcript/v1"

RunKey = tuple[str, str, int]  # (case_id, fingerprint, run_index)


class ManifestMismatch(RuntimeError):
    """Existing store was written under a different manifest fingerprint."""


@dataclass
class RunRecord:
    """One backend invocation and its grade."""

    case_id: str
    fingerprint: str
    run_index: int
    params: dict[str, Any]
    raw_text: str
    artifacts: dict[str, str] = field(default_factory=dict)
    failure: dict[str, str] | None = None
    grade: dict[str, Any] | None = None
    latency_s: float = 0.0
    ts: str = ""

    @property
    def key(self) -> RunKey:
        return (self.case_id, self.fingerprint, self.run_index)

    def to_response(self) -> BackendResponse:
        failure = Failure(**self.failure) if self.failure else None
        return BackendResponse(
            raw_text=self.raw_text,
            artifacts=dict(self.artifacts),
            latency_s=self.latency_s,
            failure=failure,
        )


class TranscriptStore:
    """Thread-safe append-only JSONL store keyed by (case, fingerprint, run)."""

    def __init__(self, path: Path, manifest_fingerprint: str):
        self.path = Path(path)
        self.manifest_fingerprint = manifest_fingerprint
        self._lock = threading.Lock()
        self._records: list[RunRecord] = []
        self._keys: set[RunKey] = set()
        self._fh = None

    @classmethod
    def open(cls, path: Path, manifest_fingerprint: str) -> "TranscriptStore":
        """Create the store, or resume it after verifying the fingerprint."""
        store = cls(path, manifest_fingerprint)
        if store.path.exists():
            store._load_existing()
        else:
            store.path.parent.mkdir(parents=True, exist_ok=True)
            with store.path.open("w", encoding="utf-8") as fh:
                fh.write(
                    json.dumps({"format": FORMAT, "manifest_fingerprint": manifest_fingerprint})
                    + "\n"
                )
        store._fh = store.path.open("a", encoding="utf-8")
        return store

    def _load_existing(self) -> None:
        with self.path.open("r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise ManifestMismatch(f"{self.path} exists but has no header")
        header = json.loads(lines[0])
        if header.get("format") != FORMAT:
            raise ManifestMismatch(f"{self.path} is not a {FORMAT} file")
        if header.get("manifest_fingerprint") != self.manifest_fingerprint:
            raise ManifestMismatch(
                f"{self.path} was written under manifest "
                f"{header.get('manifest_fingerprint')!r}, refusing to resume under "
                f"{self.manifest_fingerprint!r}"
            )
        for line in lines[1:]:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                continue  # truncated final line from a crash
            record = RunRecord(**obj)
            self._records.append(record)
            self._keys.add(record.key)

    def append(self, record: RunRecord) -> None:
        line = json.dumps(asdict(record), ensure_ascii=True)
        with self._lock:
            if record.key in self._keys:
                raise ValueError(f"duplicate run record {record.key}")
            self._fh.write(line + "\n")
            self._fh.flush()
            self._records.append(record)
            self._keys.add(record.key)

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None

    def __enter__(self) -> "TranscriptStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def completed_keys(self) -> set[RunKey]:
        with self._lock:
            return set(self._keys)

    def records(self) -> list[RunRecord]:
        with self._lock:
            return list(self._records)

    def __iter__(self) -> Iterator[RunRecord]:
        return iter(self.records())

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)
