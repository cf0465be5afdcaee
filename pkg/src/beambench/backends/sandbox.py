"""Client for the external sandbox runner (newline-delimited JSON IPC).

The runner is a long-lived process speaking one JSON message per line
over its standard streams:

  request:  {"id", "op": "execute", "script", "timeout_s"}
            {"id", "op": "health"}
  response: {"id", "status", "payload"|null, "stdout", "stderr",
             "exit_code", "wall_time_s", "artifacts", "error"|null,
             "health"|null}

status is one of ok | timeout | nonzero_exit | payload_missing |
payload_malformed | error.  The primary component treats the runner as
an external service; everything here also accepts any object with the
same ``execute``/``health`` surface, which is what tests inject.
"""

from __future__ import annotations

import json
import subprocess
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Protocol, runtime_checkable


class SandboxUnavailable(RuntimeError):
    """The runner process could not be started or has exited."""


@dataclass(frozen=True)
class SandboxResult:
    status: str
    payload: dict[str, Any] | None = None
    stdout: str = ""
    stderr: str = ""
    exit_code: int | None = None
    wall_time_s: float = 0.0
    artifacts: tuple[str, ...] = ()
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@runtime_checkable
class ScriptExecutor(Protocol):
    def execute(self, script: str, timeout_s: float = 30.0) -> SandboxResult: ...

    def health(self) -> dict[str, Any]: ...


class SandboxClient(ScriptExecutor):
    """Spawns the runner and multiplexes requests over its stdio."""

    def __init__(self, command: list[str], request_timeout_margin_s: float = 15.0):
        self.command = list(command)
        self.request_timeout_margin_s = request_timeout_margin_s
        self._proc: subprocess.Popen | None = None
        self._write_lock = threading.Lock()
        self._pending_lock = threading.Lock()
        self._pending: dict[str, _Waiter] = {}
        self._reader: threading.Thread | None = None

    def start(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            return
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SandboxUnavailable(f"cannot start sandbox runner {self.command}: {exc}") from exc
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        assert self._proc is not None and self._proc.stdout is not None
        for line in self._proc.stdout:
            line = line.strip()
            if not line:
                continue
            try:
                message = json.loads(line)
            except json.JSONDecodeError:
                continue
            waiter = None
            with self._pending_lock:
                waiter = self._pending.pop(message.get("id", ""), None)
            if waiter is not None:
                waiter.result = message
                waiter.event.set()
        # EOF: fail everything still pending
        with self._pending_lock:
            for waiter in self._pending.values():
                waiter.event.set()
            self._pending.clear()

    def _roundtrip(self, request: dict[str, Any], timeout_s: float) -> dict[str, Any]:
        if self._proc is None:
            self.start()
        if self._proc is None or self._proc.poll() is not None:
            raise SandboxUnavailable("sandbox runner is not running")
        waiter = _Waiter()
        with self._pending_lock:
            self._pending[request["id"]] = waiter
        with self._write_lock:
            assert self._proc.stdin is not None
            self._proc.stdin.write(json.dumps(request) + "\n")
            self._proc.stdin.flush()
        if not waiter.event.wait(timeout=timeout_s):
            with self._pending_lock:
                self._pending.pop(request["id"], None)
            raise SandboxUnavailable(f"sandbox runner did not answer within {timeout_s}s")
        if waiter.result is None:
            raise SandboxUnavailable("sandbox runner exited mid-request")
        return waiter.result

    def execute(self, script: str, timeout_s: float = 30.0) -> SandboxResult:
        request = {
            "id": uuid.uuid4().hex,
            "op": "execute",
            "script": script,
            "timeout_s": timeout_s,
        }
        message = self._roundtrip(request, timeout_s + self.request_timeout_margin_s)
        return SandboxResult(
            status=str(message.get("status", "error")),
            payload=message.get("payload"),
            stdout=message.get("stdout", ""),
            stderr=message.get("stderr", ""),
            exit_code=message.get("exit_code"),
            wall_time_s=float(message.get("wall_time_s", 0.0)),
            artifacts=tuple(message.get("artifacts", ())),
            error=message.get("error"),
        )

    def health(self) -> dict[str, Any]:
        request = {"id": uuid.uuid4().hex, "op": "health"}
        message = self._roundtrip(request, self.request_timeout_margin_s)
        return message.get("health", {})

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            try:
                if self._proc.stdin is not None:
                    self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except Exception:
                self._proc.kill()
        self._proc = None


@dataclass
class _Waiter:
    event: threading.Event = field(default_factory=threading.Event)
    result: dict[str, Any] | None = None
