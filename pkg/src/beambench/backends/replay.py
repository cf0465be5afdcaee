"""Replay backend: re-serve stored responses without touching the model.

Responses are keyed by (case_id, prompt fingerprint, run_index) and
returned byte-identical, so two evaluations from the same transcript
store always produce identical reports.
"""

from __future__ import annotations

import json
from pathlib import Path

from .base import Backend, BackendRequest, BackendResponse, TranscriptMiss
from .transcript import RunRecord, TranscriptStore


class ReplayBackend(Backend):
    def __init__(self, records: list[RunRecord]):
        self._by_key = {r.key: r for r in records}

    @classmethod
    def from_store(cls, store: TranscriptStore) -> "ReplayBackend":
        return cls(store.records())

    @classmethod
    def from_path(cls, path: Path) -> "ReplayBackend":
        """Open a store read-only under whatever manifest wrote it."""
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            header = json.loads(fh.readline())
        with TranscriptStore.open(path, header.get("manifest_fingerprint", "")) as store:
            return cls(store.records())

    def invoke(self, request: BackendRequest) -> BackendResponse:
        key = (request.case_id, request.bundle.fingerprint, request.run_index)
        record = self._by_key.get(key)
        if record is None:
            raise TranscriptMiss(f"no stored response for {key}")
        return record.to_response()
