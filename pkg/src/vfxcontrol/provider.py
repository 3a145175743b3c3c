"""Chat-completion transport: one live OpenAI-compatible client and one
record/replay fixture store.

Requests are addressed by a canonical hash that covers message text, image
digests, temperature, max_tokens, and the structured-output flag - never
credentials, endpoint, model name, or other transport metadata - so a
transcript recorded against one deployment replays against any other.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx

from .errors import FixtureMissError, ProviderError

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"
DEFAULT_MODEL = "gpt-4o"
DEFAULT_TIMEOUT_SECONDS = 60.0
API_KEY_ENV_VARS = ("VFXCONTROL_API_KEY", "OPENAI_API_KEY")


@dataclass(frozen=True)
class ImagePart:
    data: bytes
    media_type: str = "image/png"

    def digest(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


@dataclass(frozen=True)
class Message:
    role: str
    text: str
    images: tuple[ImagePart, ...] = ()


@dataclass(frozen=True)
class ProviderRequest:
    messages: tuple[Message, ...]
    temperature: float
    max_tokens: int
    structured_output: bool = False
    stream: bool = False


@dataclass
class ProviderResponse:
    text: str
    usage: dict = field(default_factory=dict)
    latency: float = 0.0


def canonical_request_hash(request: ProviderRequest) -> str:
    payload = {
        "messages": [
            {
                "role": m.role,
                "text": m.text,
                "images": [img.digest() for img in m.images],
            }
            for m in request.messages
        ],
        "temperature": request.temperature,
        "max_tokens": request.max_tokens,
        "structured_output": request.structured_output,
    }
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


class Provider(Protocol):
    def send(
        self, request: ProviderRequest, on_delta: Callable[[str], None] | None = None
    ) -> ProviderResponse: ...


@dataclass
class ProviderConfig:
    endpoint: str = DEFAULT_ENDPOINT
    model: str = DEFAULT_MODEL
    timeout: float = DEFAULT_TIMEOUT_SECONDS
    retries: int = 1

    @classmethod
    def from_file(cls, path: str | Path) -> "ProviderConfig":
        doc = json.loads(Path(path).read_text())
        return cls(
            endpoint=doc.get("endpoint", DEFAULT_ENDPOINT),
            model=doc.get("model", DEFAULT_MODEL),
            timeout=float(doc.get("timeout", DEFAULT_TIMEOUT_SECONDS)),
            retries=int(doc.get("retries", 1)),
        )


def _api_key() -> str:
    for var in API_KEY_ENV_VARS:
        key = os.environ.get(var)
        if key:
            return key
    raise ProviderError(
        f"no API key configured; set one of {', '.join(API_KEY_ENV_VARS)}"
    )


class LiveProvider:
    """One HTTP round-trip per send against an OpenAI-compatible endpoint."""

    def __init__(self, config: ProviderConfig | None = None, client: httpx.Client | None = None):
        self.config = config or ProviderConfig()
        self._client = client or httpx.Client(timeout=self.config.timeout)

    def _payload(self, request: ProviderRequest) -> dict:
        messages = []
        for m in request.messages:
            if m.images:
                content: list[dict] = [{"type": "text", "text": m.text}]
                for img in m.images:
                    encoded = base64.b64encode(img.data).decode()
                    content.append(
                        {
                            "type": "image_url",
                            "image_url": {"url": f"data:{img.media_type};base64,{encoded}"},
                        }
                    )
                messages.append({"role": m.role, "content": content})
            else:
                messages.append({"role": m.role, "content": m.text})
        payload = {
            "model": self.config.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.structured_output:
            payload["response_format"] = {"type": "json_object"}
        if request.stream:
            payload["stream"] = True
        return payload

    def send(
        self, request: ProviderRequest, on_delta: Callable[[str], None] | None = None
    ) -> ProviderResponse:
        headers = {"Authorization": f"Bearer {_api_key()}"}
        payload = self._payload(request)
        started = time.monotonic()
        attempts = self.config.retries + 1
        last_error: Exception | None = None
        for _ in range(attempts):
            try:
                if request.stream:
                    return self._send_streaming(payload, headers, started, on_delta)
                response = self._client.post(self.config.endpoint, json=payload, headers=headers)
                response.raise_for_status()
                doc = response.json()
                text = doc["choices"][0]["message"]["content"]
                return ProviderResponse(
                    text=text,
                    usage=doc.get("usage", {}),
                    latency=time.monotonic() - started,
                )
            except (httpx.HTTPError, KeyError, json.JSONDecodeError) as exc:
                last_error = exc
        raise ProviderError(f"provider request failed after {attempts} attempt(s): {last_error}")

    def _send_streaming(
        self,
        payload: dict,
        headers: dict,
        started: float,
        on_delta: Callable[[str], None] | None,
    ) -> ProviderResponse:
        chunks: list[str] = []
        with self._client.stream(
            "POST", self.config.endpoint, json=payload, headers=headers
        ) as response:
            response.raise_for_status()
            for line in response.iter_lines():
                if not line.startswith("data:"):
                    continue
                data = line[len("data:"):].strip()
                if data == "[DONE]":
                    break
                delta = (
                    json.loads(data).get("choices", [{}])[0].get("delta", {}).get("content")
                )
                if delta:
                    chunks.append(delta)
                    if on_delta is not None:
                        on_delta(delta)
        return ProviderResponse(text="".join(chunks), latency=time.monotonic() - started)


class FixtureProvider:
    """Replay (and optionally record) transcripts keyed by canonical hash.

    Layout: one `<hash>.json` file per exchange, holding the request summary
    for inspection plus the recorded response text.
    """

    def __init__(self, directory: str | Path, record: bool = False):
        self.directory = Path(directory)
        self.record_mode = record
        self._lock = threading.Lock()
        if record:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, request_hash: str) -> Path:
        return self.directory / f"{request_hash}.json"

    def send(
        self, request: ProviderRequest, on_delta: Callable[[str], None] | None = None
    ) -> ProviderResponse:
        request_hash = canonical_request_hash(request)
        path = self._path(request_hash)
        with self._lock:
            if not path.exists():
                first_line = request.messages[0].text.splitlines()[0][:96] if request.messages else ""
                raise FixtureMissError(
                    f"no recorded response for request {request_hash} ({first_line!r}) in {self.directory}"
                )
            doc = json.loads(path.read_text())
        text = doc["response"]["text"]
        if on_delta is not None:
            on_delta(text)
        return ProviderResponse(text=text, usage=doc["response"].get("usage", {}))

    def record(self, request: ProviderRequest, response: ProviderResponse) -> None:
        if not self.record_mode:
            raise ProviderError("fixture store is not in record mode")
        request_hash = canonical_request_hash(request)
        doc = {
            "request": {
                "messages": [
                    {"role": m.role, "text": m.text, "images": [i.digest() for i in m.images]}
                    for m in request.messages
                ],
                "temperature": request.temperature,
                "max_tokens": request.max_tokens,
                "structured_output": request.structured_output,
            },
            "response": {"text": response.text, "usage": response.usage},
        }
        with self._lock:
            self._path(request_hash).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


class RecordingProvider:
    """Pass-through wrapper that records every live exchange into a fixture store."""

    def __init__(self, inner: Provider, store: FixtureProvider):
        self.inner = inner
        self.store = store

    def send(
        self, request: ProviderRequest, on_delta: Callable[[str], None] | None = None
    ) -> ProviderResponse:
        response = self.inner.send(request, on_delta=on_delta)
        self.store.record(request, response)
        return response


def bundled_fixture_dir() -> Path:
    """Directory of the transcripts shipped with the package."""
    from importlib import resources

    return Path(str(resources.files("vfxcontrol.data").joinpath("fixtures")))
