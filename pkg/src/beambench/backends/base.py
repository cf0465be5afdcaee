"""Backend interface: anything that can produce an answer for a prompt."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Protocol, runtime_checkable

from ..model import BeamModel, ReactionSet
from ..prompts import PromptBundle


class BackendError(RuntimeError):
    """Base for backend invocation failures that abort a batch."""


class NetworkError(BackendError):
    pass


class RateLimited(NetworkError):
    pass


class Timeout(BackendError):
    pass


class TranscriptMiss(BackendError):
    """Replay store has no record for the requested key."""


@dataclass(frozen=True)
class BackendRequest:
    case_id: str
    bundle: PromptBundle
    run_index: int
    temperature: float = 0.7
    max_tokens: int = 2048
    seed: int | None = None
    # the problem model; used by simulating backends, ignored by live ones
    model: BeamModel | None = None

    def params(self) -> dict[str, Any]:
        return {
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Failure:
    kind: str
    detail: str = ""


@dataclass(frozen=True)
class BackendResponse:
    raw_text: str
    structured_answer: ReactionSet | None = None
    artifacts: dict[str, str] = field(default_factory=dict)
    latency_s: float = 0.0
    failure: Failure | None = None


@runtime_checkable
class Backend(Protocol):
    def invoke(self, request: BackendRequest) -> BackendResponse: ...
