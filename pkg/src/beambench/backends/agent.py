"""The agent pipeline: prompt -> generated script -> sandbox -> payload.

In ``script`` mode the chat response's final code block is executed in
the sandbox and the printed result payload becomes the answer.  In
``model_document`` mode (the fallback when no script runtime is
available) the response's model-document is solved by the in-process FE
solver instead.  Extraction/execution problems are recorded as failures
on the response, graded incorrect; they never abort a batch.
"""

from __future__ import annotations

import json
import re

from .. import fem
from ..document import ParseError
from ..model import ValidationError
from ..protocol import RESULT_DELIMITER, extract_model_document
from .base import Backend, BackendRequest, BackendResponse, Failure
from .sandbox import ScriptExecutor, SandboxUnavailable

_FENCE = re.compile(r"```([^\n`]*)\n(.*?)```", re.DOTALL)

# sandbox statuses that indicate the generated script failed
_SANDBOX_FAILURES = {"timeout", "nonzero_exit", "payload_missing", "payload_malformed", "error"}


def extract_script(text: str) -> str | None:
    """The last fenced code block that is code (model-document fences are data)."""
    blocks = [(tag.strip(), body) for tag, body in _FENCE.findall(text)]
    blocks = [body for tag, body in blocks if tag != "model-document"]
    if not blocks:
        return None
    return blocks[-1]


class AgentBackend(Backend):
    def __init__(
        self,
        chat: Backend,
        executor: ScriptExecutor | None = None,
        mode: str = "script",
        script_timeout_s: float = 30.0,
    ):
        if mode not in ("script", "model_document"):
            raise ValueError(f"unknown agent mode {mode!r}")
        if mode == "script" and executor is None:
            raise ValueError("script mode needs a sandbox executor")
        self.chat = chat
        self.executor = executor
        self.mode = mode
        self.script_timeout_s = script_timeout_s

    def invoke(self, request: BackendRequest) -> BackendResponse:
        inner = self.chat.invoke(request)
        if inner.failure is not None:
            return inner
        if self.mode == "model_document":
            return self._grade_document(request, inner)
        return self._run_script(request, inner)

    def _run_script(self, request: BackendRequest, inner: BackendResponse) -> BackendResponse:
        artifacts = dict(inner.artifacts)
        script = extract_script(inner.raw_text)
        if script is None:
            return BackendResponse(
                raw_text=inner.raw_text,
                artifacts=artifacts,
                latency_s=inner.latency_s,
                failure=Failure("CodeExtractionError", "response contains no fenced code block"),
            )
        artifacts["generated_script"] = script
        assert self.executor is not None
        try:
            result = self.executor.execute(script, timeout_s=self.script_timeout_s)
        except SandboxUnavailable as exc:
            return BackendResponse(
                raw_text=inner.raw_text,
                artifacts=artifacts,
                latency_s=inner.latency_s,
                failure=Failure("SandboxError", str(exc)),
            )
        artifacts["execution_log"] = result.stdout + ("\n" + result.stderr if result.stderr else "")
        if result.artifacts:
            artifacts["sandbox_artifacts"] = json.dumps(list(result.artifacts))
        if result.status in _SANDBOX_FAILURES or result.payload is None:
            detail = result.error or result.stderr[-500:] or result.status
            return BackendResponse(
                raw_text=inner.raw_text,
                artifacts=artifacts,
                latency_s=inner.latency_s,
                failure=Failure(f"SandboxError:{result.status}", detail),
            )
        payload_line = json.dumps(result.payload)
        artifacts["result_payload"] = payload_line
        doc = result.payload.get("model")
        if isinstance(doc, dict):
            artifacts["model_document"] = json.dumps(doc)
        # surface the executed output where the answer parser looks first
        raw_text = inner.raw_text + "\n" + RESULT_DELIMITER + "\n" + payload_line + "\n"
        return BackendResponse(
            raw_text=raw_text,
            artifacts=artifacts,
            latency_s=inner.latency_s + result.wall_time_s,
        )

    def _grade_document(self, request: BackendRequest, inner: BackendResponse) -> BackendResponse:
        artifacts = dict(inner.artifacts)
        doc = extract_model_document(inner.raw_text)
        if doc is None:
            return BackendResponse(
                raw_text=inner.raw_text,
                artifacts=artifacts,
                latency_s=inner.latency_s,
                failure=Failure("ModelDocumentMissing", "response carries no model-document"),
            )
        artifacts["model_document"] = doc
        try:
            _, reactions = fem.solve_document(doc, check=False)
        except (ParseError, ValidationError, ValueError) as exc:
            return BackendResponse(
                raw_text=inner.raw_text,
                artifacts=artifacts,
                latency_s=inner.latency_s,
                failure=Failure("ModelDocumentInvalid", str(exc)),
            )
        return BackendResponse(
            raw_text=inner.raw_text,
            structured_answer=reactions,
            artifacts=artifacts,
            latency_s=inner.latency_s,
        )
