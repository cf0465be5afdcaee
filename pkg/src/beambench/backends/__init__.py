from .base import (
    Backend,
    BackendError,
    BackendRequest,
    BackendResponse,
    Failure,
    NetworkError,
    RateLimited,
    Timeout,
    TranscriptMiss,
)
from .agent import AgentBackend, extract_script
from .live import LiveBackend
from .mock import MockBackend, derive_seed, mock_profiles
from .replay import ReplayBackend
from .sandbox import SandboxClient, SandboxResult, SandboxUnavailable, ScriptExecutor
from .transcript import ManifestMismatch, RunRecord, TranscriptStore

__all__ = [
    "AgentBackend",
    "Backend",
    "BackendError",
    "BackendRequest",
    "BackendResponse",
    "Failure",
    "LiveBackend",
    "ManifestMismatch",
    "MockBackend",
    "NetworkError",
    "RateLimited",
    "ReplayBackend",
    "RunRecord",
    "SandboxClient",
    "SandboxResult",
    "SandboxUnavailable",
    "ScriptExecutor",
    "Timeout",
    "TranscriptMiss",
    "TranscriptStore",
    "derive_seed",
    "extract_script",
    "mock_profiles",
]
