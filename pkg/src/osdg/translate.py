"""Translation front-stage: non-English input is converted to English before
classification. The backend is pluggable; a deterministic phrase-dictionary
stub ships in-repo so the multilingual path is testable offline.
"""

import hashlib
import json
import logging
import re
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from osdg.errors import MalformedResponse, TranslationError
from osdg.sdg import validate_language

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source: str
    target: str = "en"


class TranslatorBackend(Protocol):
    name: str

    def translate(self, request: TranslationRequest) -> str: ...


class TranslationCache:
    """Bounded LRU keyed by (backend, source language, content digest).

    Values are deterministic per backend, so concurrent write races are
    benign; the lock only protects the OrderedDict bookkeeping.
    """

    def __init__(self, max_entries: int = 1024):
        self.max_entries = max_entries
        self._data: OrderedDict[tuple, str] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(backend_name: str, source: str, text: str) -> tuple:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return (backend_name, source, digest)

    def get(self, key: tuple) -> str | None:
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                self.hits += 1
                return self._data[key]
            self.misses += 1
            return None

    def put(self, key: tuple, value: str) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.max_entries:
                self._data.popitem(last=False)


def translate_to_english(
    request: TranslationRequest,
    backend: TranslatorBackend | None,
    cache: TranslationCache | None = None,
) -> str:
    """English passes through byte-identical without touching the backend."""
    source = validate_language(request.source)
    if source == "en":
        return request.text
    if backend is None:
        raise TranslationError(f"no translator configured for language {source!r}")
    key = TranslationCache.key(backend.name, source, request.text) if cache else None
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            return cached
    result = backend.translate(request)
    if request.text.strip() and not (result or "").strip():
        raise MalformedResponse(f"backend {backend.name!r} returned empty translation")
    if cache is not None:
        cache.put(key, result)
    return result


# --- dictionary stub -------------------------------------------------------

_WORD_SHELL = re.compile(r"^(\W*)(.*?)(\W*)$", re.UNICODE | re.DOTALL)


@dataclass
class DictionaryBackend:
    """Greedy longest-phrase substitution from bundled per-language tables.

    Not a real translator: it exists so tests and offline runs exercise the
    full multilingual path deterministically. Unknown words pass through.
    """

    tables: dict[str, dict[str, str]]
    name: str = "dictionary-stub"
    calls: int = field(default=0, compare=False)

    @classmethod
    def from_file(cls, path: str | Path) -> "DictionaryBackend":
        tables = json.loads(Path(path).read_text(encoding="utf-8"))
        normalized = {
            lang: {" ".join(k.lower().split()): v for k, v in entries.items()}
            for lang, entries in tables.items()
        }
        return cls(tables=normalized)

    @classmethod
    def bundled(cls) -> "DictionaryBackend":
        return cls.from_file(Path(__file__).parent / "data" / "stub_dictionaries.json")

    def translate(self, request: TranslationRequest) -> str:
        self.calls += 1
        table = self.tables.get(request.source)
        if table is None:
            raise TranslationError(f"dictionary stub has no table for {request.source!r}")
        max_len = max((len(k.split()) for k in table), default=1)
        raw_words = request.text.split()
        shells = [_WORD_SHELL.match(word).groups() for word in raw_words]
        cores = [core.lower() for _, core, _ in shells]
        out: list[str] = []
        i = 0
        while i < len(raw_words):
            for span in range(min(max_len, len(raw_words) - i), 0, -1):
                candidate = " ".join(cores[i : i + span])
                if candidate in table:
                    lead = shells[i][0]
                    trail = shells[i + span - 1][2]
                    out.append(lead + table[candidate] + trail)
                    i += span
                    break
            else:
                out.append(raw_words[i])
                i += 1
        return " ".join(out)


# --- HTTP adapter ----------------------------------------------------------


@dataclass
class HttpBackendConfig:
    endpoint: str
    auth_token: str | None = None
    timeout: float = 10.0
    max_retries: int = 2
    backoff_base: float = 0.25


class HttpTranslatorBackend:
    """POSTs {text, source, target} as JSON and expects {"translation": ...}.

    Transient failures (transport errors, 5xx) retry with exponential
    backoff up to max_retries; anything else fails immediately.
    """

    def __init__(self, config: HttpBackendConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self.name = f"http:{config.endpoint}"
        headers = {}
        if config.auth_token:
            headers["Authorization"] = f"Bearer {config.auth_token}"
        self._client = httpx.Client(
            timeout=config.timeout, headers=headers, transport=transport
        )

    def translate(self, request: TranslationRequest) -> str:
        body = {"text": request.text, "source": request.source, "target": request.target}
        attempts = 0
        last_error: Exception | None = None
        while attempts <= self.config.max_retries:
            attempts += 1
            try:
                response = self._client.post(self.config.endpoint, json=body)
            except httpx.HTTPError as err:
                last_error = err
                if attempts <= self.config.max_retries:
                    time.sleep(self.config.backoff_base * 2 ** (attempts - 1))
                continue
            if response.status_code >= 500:
                last_error = TranslationError(f"backend returned {response.status_code}")
                if attempts <= self.config.max_retries:
                    time.sleep(self.config.backoff_base * 2 ** (attempts - 1))
                continue
            if response.status_code != 200:
                raise TranslationError(
                    f"backend returned {response.status_code}", retries=attempts - 1
                )
            try:
                payload = response.json()
                translation = payload["translation"]
            except (ValueError, KeyError, TypeError):
                raise MalformedResponse(
                    f"backend response is not {{'translation': ...}}: {response.text[:200]!r}",
                    retries=attempts - 1,
                ) from None
            if not isinstance(translation, str):
                raise MalformedResponse("translation field is not a string", retries=attempts - 1)
            return translation
        raise TranslationError(
            f"backend failed after {attempts} attempts: {last_error}",
            retries=attempts - 1,
            cause=last_error,
        )

    def close(self):
        self._client.close()


def http_backend(
    config: HttpBackendConfig, transport: httpx.BaseTransport | None = None
) -> HttpTranslatorBackend:
    return HttpTranslatorBackend(config, transport=transport)
