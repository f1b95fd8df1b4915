import json

import httpx
import pytest

from osdg.errors import MalformedResponse, TranslationError, UnsupportedLanguage
from osdg.translate import (
    DictionaryBackend,
    HttpBackendConfig,
    TranslationCache,
    TranslationRequest,
    http_backend,
    translate_to_english,
)


def test_english_passthrough_never_calls_backend():
    backend = DictionaryBackend.bundled()
    out = translate_to_english(TranslationRequest("hello world", "en"), backend)
    assert out == "hello world"
    assert backend.calls == 0


def test_dictionary_stub_phrase_translation():
    backend = DictionaryBackend.bundled()
    out = backend.translate(TranslationRequest("agua limpia y saneamiento", "es"))
    assert out == "clean water and sanitation"


def test_dictionary_preserves_punctuation_shells():
    backend = DictionaryBackend(tables={"es": {"agua limpia": "clean water"}})
    out = backend.translate(TranslationRequest("¿Agua limpia?", "es"))
    assert out == "¿clean water?"


def test_dictionary_unknown_words_pass_through():
    backend = DictionaryBackend(tables={"es": {"y": "and"}})
    assert backend.translate(TranslationRequest("foo y bar", "es")) == "foo and bar"


def test_dictionary_missing_language_table():
    backend = DictionaryBackend(tables={"es": {}})
    with pytest.raises(TranslationError):
        backend.translate(TranslationRequest("hej", "sv"))


def test_unsupported_language_rejected():
    with pytest.raises(UnsupportedLanguage):
        translate_to_english(TranslationRequest("konnichiwa", "ja"), DictionaryBackend.bundled())


def test_cache_hit_skips_backend():
    backend = DictionaryBackend.bundled()
    cache = TranslationCache()
    req = TranslationRequest("agua limpia y saneamiento", "es")
    first = translate_to_english(req, backend, cache)
    second = translate_to_english(req, backend, cache)
    assert first == second == "clean water and sanitation"
    assert backend.calls == 1
    assert cache.hits == 1


def test_cache_never_changes_results():
    backend = DictionaryBackend.bundled()
    req = TranslationRequest("la salud pública mejora", "es")
    without_cache = translate_to_english(req, backend)
    with_cache = translate_to_english(req, backend, TranslationCache())
    assert without_cache == with_cache


def test_cache_bounded():
    cache = TranslationCache(max_entries=2)
    for i in range(5):
        cache.put(("b", "es", str(i)), f"v{i}")
    assert cache.get(("b", "es", "0")) is None
    assert cache.get(("b", "es", "4")) == "v4"


def test_empty_translation_for_nonempty_input_rejected():
    class EmptyBackend:
        name = "empty"

        def translate(self, request):
            return "   "

    with pytest.raises(MalformedResponse):
        translate_to_english(TranslationRequest("hola", "es"), EmptyBackend())


# --- HTTP adapter -------------------------------------------------------------


def _mock_backend(handler, max_retries=2):
    transport = httpx.MockTransport(handler)
    return http_backend(
        HttpBackendConfig(
            endpoint="http://translator.test/translate",
            max_retries=max_retries,
            backoff_base=0.0,
        ),
        transport=transport,
    )


def test_http_backend_success():
    def handler(request):
        body = json.loads(request.content)
        assert body == {"text": "hola", "source": "es", "target": "en"}
        return httpx.Response(200, json={"translation": "x"})

    backend = _mock_backend(handler)
    assert backend.translate(TranslationRequest("hola", "es")) == "x"


def test_http_backend_retries_then_fails():
    attempts = []

    def handler(request):
        attempts.append(1)
        return httpx.Response(500, text="boom")

    backend = _mock_backend(handler, max_retries=2)
    with pytest.raises(TranslationError) as exc:
        backend.translate(TranslationRequest("hola", "es"))
    assert len(attempts) == 3  # initial try + 2 retries
    assert exc.value.retries == 2


def test_http_backend_retries_then_succeeds():
    attempts = []

    def handler(request):
        attempts.append(1)
        if len(attempts) < 3:
            return httpx.Response(503, text="busy")
        return httpx.Response(200, json={"translation": "late"})

    backend = _mock_backend(handler, max_retries=2)
    assert backend.translate(TranslationRequest("hola", "es")) == "late"
    assert len(attempts) == 3


def test_http_backend_malformed_response():
    backend = _mock_backend(lambda request: httpx.Response(200, json={"nope": 1}))
    with pytest.raises(MalformedResponse):
        backend.translate(TranslationRequest("hola", "es"))


def test_http_backend_4xx_fails_without_retry():
    attempts = []

    def handler(request):
        attempts.append(1)
        return httpx.Response(403, text="denied")

    backend = _mock_backend(handler, max_retries=5)
    with pytest.raises(TranslationError):
        backend.translate(TranslationRequest("hola", "es"))
    assert len(attempts) == 1


def test_http_backend_sends_auth_header():
    def handler(request):
        assert request.headers["Authorization"] == "Bearer sekrit"
        return httpx.Response(200, json={"translation": "ok"})

    backend = http_backend(
        HttpBackendConfig(endpoint="http://t.test/x", auth_token="sekrit", backoff_base=0.0),
        transport=httpx.MockTransport(handler),
    )
    assert backend.translate(TranslationRequest("hola", "es")) == "ok"
