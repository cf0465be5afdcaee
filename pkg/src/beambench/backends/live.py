"""Client for an OpenAI-compatible chat-completion endpoint.

Any hosted model that speaks the de-facto wire contract (model name,
message list, temperature) can serve as the system under test; which
model that is stays configuration.  The credential is read from an
environment variable, never passed as a flag.  Transient failures are
retried with exponential backoff up to a bounded budget.
"""

from __future__ import annotations

import os
import time

import httpx

from .base import Backend, BackendRequest, BackendResponse, NetworkError, RateLimited, Timeout

DEFAULT_API_KEY_ENV = "BEAMBENCH_API_KEY"
RETRYABLE_STATUS = {429, 500, 502, 503, 504}


class LiveBackend(Backend):
    def __init__(
        self,
        base_url: str,
        model_id: str,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        timeout_s: float = 120.0,
        max_retries: int = 4,
        backoff_s: float = 1.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.api_key_env = api_key_env
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        headers = {}
        api_key = os.environ.get(api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.Client(
            base_url=self.base_url,
            headers=headers,
            timeout=timeout_s,
            transport=transport,
        )

    def _request_body(self, request: BackendRequest) -> dict:
        body = {
            "model": self.model_id,
            "messages": [
                {"role": "system", "content": request.bundle.system_text},
                {"role": "user", "content": request.bundle.user_text},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.seed is not None:
            body["seed"] = request.seed
        return body

    def invoke(self, request: BackendRequest) -> BackendResponse:
        body = self._request_body(request)
        last_error: Exception | None = None
        start = time.monotonic()
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            try:
                resp = self._client.post("/chat/completions", json=body)
            except httpx.TimeoutException as exc:
                last_error = Timeout(f"request timed out: {exc}")
                continue
            except httpx.HTTPError as exc:
                last_error = NetworkError(f"transport error: {exc}")
                continue
            if resp.status_code == 429:
                last_error = RateLimited(f"rate limited: {resp.text[:200]}")
                continue
            if resp.status_code in RETRYABLE_STATUS:
                last_error = NetworkError(f"server error {resp.status_code}: {resp.text[:200]}")
                continue
            if resp.status_code != 200:
                raise NetworkError(f"endpoint returned {resp.status_code}: {resp.text[:500]}")
            try:
                content = resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise NetworkError(f"malformed completion response: {exc}") from exc
            return BackendResponse(
                raw_text=content if isinstance(content, str) else str(content),
                latency_s=time.monotonic() - start,
            )
        raise last_error if last_error is not None else NetworkError("retry budget exhausted")

    def close(self) -> None:
        self._client.close()
