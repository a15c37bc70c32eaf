"""Completion gateway: HTTP chat-completions, replayable mock, and in-process backends."""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

import httpx

from .prompting.builders import PromptBundle

API_KEY_ENV = ("LOGSMITH_API_KEY", "OPENAI_API_KEY")
BACKENDS = ("http", "mock", "heuristic")  # heuristic: offline rule-based answers


class GatewayError(RuntimeError):
    code = "gateway_error"


class AuthError(GatewayError):
    code = "auth_error"


class ProviderUnavailable(GatewayError):
    code = "provider_unavailable"


class MockMiss(GatewayError):
    code = "mock_miss"

    def __init__(self, prompt_sha256: str):
        super().__init__(f"no mock response for prompt {prompt_sha256}")
        self.prompt_sha256 = prompt_sha256


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4o-mini"
    temperature: float = 0.0
    max_tokens: int = 512
    timeout_s: float = 60.0
    retries: int = 3
    concurrency: int = 4
    backend: str = "mock"
    mock_dir: str | None = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.concurrency < 1:
            raise ConfigError("concurrency must be >= 1")
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {', '.join(BACKENDS)}")

    @classmethod
    def from_mapping(cls, values: dict[str, str], base: Path | None = None) -> "LlmConfig":
        kinds = {f.name for f in fields(cls)}
        kwargs: dict[str, object] = {}
        for key, raw in values.items():
            if key not in kinds:
                continue
            if key in ("temperature", "timeout_s"):
                kwargs[key] = float(raw)
            elif key in ("max_tokens", "retries", "concurrency"):
                kwargs[key] = int(raw)
            else:
                kwargs[key] = raw
        if kwargs.get("mock_dir") and base is not None and not Path(str(kwargs["mock_dir"])).is_absolute():
            kwargs["mock_dir"] = str((base / str(kwargs["mock_dir"])).resolve())
        return cls(**kwargs)


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for number, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def normalized_prompt(bundle: PromptBundle) -> str:
    text = bundle.system_text + "\n\n" + bundle.user_text
    return "\n".join(line.rstrip() for line in text.splitlines()).strip("\n")


def prompt_sha256(bundle: PromptBundle) -> str:
    return hashlib.sha256(normalized_prompt(bundle).encode("utf-8")).hexdigest()


@dataclass
class Completion:
    text: str
    latency_ms: int


class MockBackend:
    """Responses stored as ``<prompt sha256>.txt``; optional ``playlist.jsonl`` fallback."""

    def __init__(self, mock_dir: str | Path, playlist: Sequence[str] | None = None):
        self.dir = Path(mock_dir)
        if playlist is None and (self.dir / "playlist.jsonl").is_file():
            playlist = [json.loads(l) for l in (self.dir / "playlist.jsonl").read_text("utf-8").splitlines()
                        if l.strip()]
        self.playlist = list(playlist or [])
        self._cursor = 0
        self._lock = threading.Lock()

    def __call__(self, bundle: PromptBundle, cfg: LlmConfig) -> Completion:
        sha = prompt_sha256(bundle)
        path = self.dir / f"{sha}.txt"
        if path.is_file():
            return Completion(path.read_text("utf-8"), 0)
        with self._lock:
            if self._cursor < len(self.playlist):
                text = self.playlist[self._cursor]
                self._cursor += 1
                return Completion(text, 0)
        raise MockMiss(sha)


class CallableBackend:
    """Wrap ``fn(bundle) -> str``; handy for heuristics and tests."""

    def __init__(self, fn: Callable[[PromptBundle], str]):
        self.fn = fn

    def __call__(self, bundle: PromptBundle, cfg: LlmConfig) -> Completion:
        return Completion(self.fn(bundle), 0)


class HttpBackend:
    """Chat-completions POST with retry and exponential backoff."""

    def __init__(self, api_key: str | None = None, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep, backoff_s: float = 0.5):
        self.api_key = api_key if api_key is not None else next(
            (os.environ[k] for k in API_KEY_ENV if os.environ.get(k)), None)
        self.transport = transport
        self.sleep = sleep
        self.backoff_s = backoff_s

    def __call__(self, bundle: PromptBundle, cfg: LlmConfig) -> Completion:
        if not self.api_key:
            raise AuthError(f"no API key: set {' or '.join(API_KEY_ENV)}")
        payload = {
            "model": cfg.model,
            "messages": [{"role": "system", "content": bundle.system_text},
                         {"role": "user", "content": bundle.user_text}],
            "temperature": cfg.temperature,
            "max_tokens": cfg.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last = "no attempt made"
        with httpx.Client(transport=self.transport, timeout=cfg.timeout_s) as client:
            for attempt in range(cfg.retries + 1):
                if attempt:
                    self.sleep(self.backoff_s * 2 ** (attempt - 1))
                start = time.perf_counter()
                try:
                    resp = client.post(cfg.endpoint, json=payload, headers=headers)
                except httpx.TransportError as exc:
                    last = f"transport error: {exc}"
                    continue
                latency = int((time.perf_counter() - start) * 1000)
                if resp.status_code in (401, 403):
                    raise AuthError(f"provider rejected credentials (HTTP {resp.status_code})")
                if resp.status_code == 429 or resp.status_code >= 500:
                    last = f"HTTP {resp.status_code}"
                    continue
                if resp.status_code >= 400:
                    raise ProviderUnavailable(f"HTTP {resp.status_code}: {resp.text[:200]}")
                try:
                    text = resp.json()["choices"][0]["message"]["content"]
                except (ValueError, KeyError, IndexError, TypeError):
                    last = "response without choices[0].message.content"
                    continue
                return Completion(text or "", latency)
        raise ProviderUnavailable(f"gave up after {cfg.retries + 1} attempts ({last})")


def backend_for(cfg: LlmConfig):
    if cfg.backend == "mock":
        if not cfg.mock_dir:
            raise ConfigError("backend=mock needs mock_dir")
        return MockBackend(cfg.mock_dir)
    if cfg.backend == "heuristic":
        raise ConfigError("backend=heuristic is built from a code model; use offline.responder_backend")
    return HttpBackend()


@dataclass
class Gateway:
    """Uniform ``complete`` over a backend, with a JSON-lines audit trail.

    Audit records are appended as calls finish.  When the gateway is closed
    the file is rewritten ordered by the caller-supplied request keys, so it is
    identical between runs even with concurrent requests.
    """

    cfg: LlmConfig
    backend: object = None
    audit_path: str | Path | None = None
    _records: list = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _ordinal: int = 0

    def __post_init__(self):
        if self.backend is None:
            self.backend = backend_for(self.cfg)
        if self.audit_path is not None:
            Path(self.audit_path).write_text("", "utf-8")

    def complete(self, bundle: PromptBundle, key: tuple = ()) -> str:
        sha = prompt_sha256(bundle)
        result = self.backend(bundle, self.cfg)
        record = {"phase": bundle.phase, "prompt_sha256": sha,
                  "prompt": normalized_prompt(bundle), "response": result.text,
                  "latency_ms": result.latency_ms}
        with self._lock:
            self._ordinal += 1
            self._records.append((tuple(key) or (self._ordinal,), record))
            if self.audit_path is not None:
                with open(self.audit_path, "a", encoding="utf-8", newline="\n") as fh:
                    fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
        return result.text

    def complete_many(self, jobs: Iterable[tuple[tuple, PromptBundle]]) -> list:
        """Run jobs concurrently; each result is the text or the raised error."""
        jobs = list(jobs)

        def run(job):
            key, bundle = job
            try:
                return self.complete(bundle, key)
            except GatewayError as exc:
                return exc

        if self.cfg.concurrency == 1 or len(jobs) <= 1:
            return [run(j) for j in jobs]
        with ThreadPoolExecutor(max_workers=self.cfg.concurrency) as pool:
            return list(pool.map(run, jobs))

    def records(self) -> list[dict]:
        with self._lock:
            return [r for _, r in sorted(self._records, key=lambda kr: _sort_key(kr[0]))]

    def close(self) -> None:
        if self.audit_path is None:
            return
        with open(self.audit_path, "w", encoding="utf-8", newline="\n") as fh:
            for record in self.records():
                fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


def _sort_key(key: tuple) -> tuple:
    return tuple((0, k) if isinstance(k, (int, float)) else (1, str(k)) for k in key)


def complete(bundle: PromptBundle, cfg: LlmConfig, backend=None) -> str:
    """One-shot completion without an audit trail."""
    return Gateway(cfg, backend).complete(bundle)


def mock_dir_from_audit(audit_path: str | Path, out_dir: str | Path) -> int:
    """Turn an audit log into a mock response directory; returns files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(audit_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            target = out / f"{rec['prompt_sha256']}.txt"
            if not target.exists():
                target.write_text(rec["response"], "utf-8")
                count += 1
    return count


__all__ = ["LlmConfig", "Gateway", "MockBackend", "HttpBackend", "CallableBackend", "complete",
           "AuthError", "ProviderUnavailable", "MockMiss", "GatewayError", "ConfigError",
           "prompt_sha256", "normalized_prompt", "read_config_file", "mock_dir_from_audit"]
