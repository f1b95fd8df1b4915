"""HTTP API over the classifier and the community labeling backend.

The app is built from a ServiceConfig (JSON file + OSDG_* environment
overrides); all referenced assets must exist at startup or the process
refuses to start. Classification endpoints are stateless; community
endpoints funnel through the store's serialized append log.
"""

import json
import logging
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, UploadFile, File, Form
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from osdg import __version__
from osdg.community import CommunityStore
from osdg.errors import (
    ConfigError,
    DataError,
    EmptyExtraction,
    EmptySuggestion,
    EmptyText,
    ExtractorFailed,
    NoExtractor,
    OpenSessionExists,
    OsdgError,
    TaskRetired,
)
from osdg.models import load_model_set
from osdg.ontology import load_ontology
from osdg.pipeline import (
    AggregationConfig,
    Classifier,
    FeedbackStore,
    input_digest,
    record_suggestion,
)
from osdg.translate import DictionaryBackend, HttpBackendConfig, http_backend

logger = logging.getLogger(__name__)

MIN_REQUEST_LIMIT = 1024

_STATUS_BY_CODE = {
    "EmptyText": 400,
    "UnsupportedLanguage": 400,
    "InvalidSdg": 400,
    "EmptySuggestion": 400,
    "DataError": 400,
    "MalformedHeader": 400,
    "NotOnboarded": 400,
    "IntroIncomplete": 400,
    "NoEligibleTasks": 400,
    "UnknownSession": 404,
    "UnknownTask": 404,
    "UnknownVolunteer": 404,
    "AlreadyOnboarded": 409,
    "OpenSessionExists": 409,
    "DuplicateVote": 409,
    "VoteCapReached": 409,
    "TaskRetired": 409,
    "OutOfOrderVote": 409,
    "SessionComplete": 409,
    "NoExtractor": 422,
    "EmptyExtraction": 422,
    "TranslationError": 502,
    "MalformedResponse": 502,
    "ExtractorFailed": 502,
}


@dataclass
class ServiceConfig:
    model_path: str
    ontology_path: str
    storage_dir: str
    listen: str = "127.0.0.1:8000"
    translator: dict = field(default_factory=lambda: {"kind": "dictionary"})
    pdf_extractor_command: str | None = None
    aggregation: dict = field(default_factory=dict)
    max_request_bytes: int = 1_048_576
    cors_origins: list[str] = field(default_factory=list)
    min_keyword_hits: int = 1

    @property
    def community_dir(self) -> Path:
        return Path(self.storage_dir) / "community"

    @property
    def suggestions_path(self) -> Path:
        return Path(self.storage_dir) / "suggestions.jsonl"

    def aggregation_config(self) -> AggregationConfig:
        return AggregationConfig(
            relevance_threshold=self.aggregation.get("relevance_threshold", 0.15),
            sdg_share_threshold=self.aggregation.get("sdg_share_threshold", 0.10),
        )


_ENV_KEYS = {
    "OSDG_LISTEN": "listen",
    "OSDG_MODEL_PATH": "model_path",
    "OSDG_ONTOLOGY_PATH": "ontology_path",
    "OSDG_STORAGE_DIR": "storage_dir",
    "OSDG_PDF_EXTRACTOR": "pdf_extractor_command",
    "OSDG_MAX_REQUEST_BYTES": "max_request_bytes",
}


def load_config(path: str | Path, env: dict | None = None) -> ServiceConfig:
    """Read the JSON config, apply OSDG_* overrides, and validate paths."""
    env = os.environ if env is None else env
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from None
    for env_key, field_name in _ENV_KEYS.items():
        if env_key in env:
            raw[field_name] = env[env_key]
    known = {f for f in ServiceConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        config = ServiceConfig(**raw)
    except TypeError as err:
        raise ConfigError(str(err)) from None
    config.max_request_bytes = int(config.max_request_bytes)
    if config.max_request_bytes < MIN_REQUEST_LIMIT:
        raise ConfigError(f"max_request_bytes must be >= {MIN_REQUEST_LIMIT}")
    for label, p in [
        ("model_path", config.model_path),
        ("ontology_path", config.ontology_path),
        ("storage_dir", config.storage_dir),
    ]:
        if not Path(p).exists():
            raise ConfigError(f"{label} does not exist: {p}")
    return config


def _build_translator(spec: dict):
    kind = spec.get("kind", "dictionary")
    if kind == "dictionary":
        if "path" in spec:
            return DictionaryBackend.from_file(spec["path"])
        return DictionaryBackend.bundled()
    if kind == "http":
        return http_backend(
            HttpBackendConfig(
                endpoint=spec["endpoint"],
                auth_token=spec.get("auth_token"),
                timeout=float(spec.get("timeout", 10.0)),
                max_retries=int(spec.get("max_retries", 2)),
            )
        )
    if kind == "none":
        return None
    raise ConfigError(f"unknown translator kind {kind!r}")


def extract_pdf_text(pdf_bytes: bytes, command_template: str | None) -> str:
    """Run the configured external extractor: {input}/{output} file templates
    or a plain stdin->stdout filter."""
    if not command_template:
        raise NoExtractor("no PDF extractor configured")
    try:
        if "{input}" in command_template:
            with tempfile.TemporaryDirectory() as tmp:
                in_path = Path(tmp) / "input.pdf"
                out_path = Path(tmp) / "output.txt"
                in_path.write_bytes(pdf_bytes)
                command = command_template.replace("{input}", str(in_path)).replace(
                    "{output}", str(out_path)
                )
                proc = subprocess.run(
                    shlex.split(command), capture_output=True, timeout=120
                )
                if proc.returncode != 0:
                    raise ExtractorFailed(
                        f"extractor exited {proc.returncode}: {proc.stderr[:500]!r}"
                    )
                if "{output}" in command_template:
                    return out_path.read_text(encoding="utf-8", errors="replace")
                return proc.stdout.decode("utf-8", errors="replace")
        proc = subprocess.run(
            shlex.split(command_template), input=pdf_bytes, capture_output=True, timeout=120
        )
        if proc.returncode != 0:
            raise ExtractorFailed(f"extractor exited {proc.returncode}: {proc.stderr[:500]!r}")
        return proc.stdout.decode("utf-8", errors="replace")
    except (OSError, subprocess.SubprocessError) as err:
        raise ExtractorFailed(f"extractor failed: {err}") from err


class ClassifyRequest(BaseModel):
    text: str
    language: str = "en"


class SuggestionRequest(BaseModel):
    text: str
    suggested_sdgs: list[int]
    note: str | None = None


class SessionRequest(BaseModel):
    volunteer_id: str
    mode: str = "mixed"  # "intro" | "mixed" | "sdg"
    sdg: int | None = None
    seed: int | None = None


class VoteRequest(BaseModel):
    task_id: str
    decision: str


def create_app(config: ServiceConfig) -> FastAPI:
    model_set = load_model_set(config.model_path)
    ontology = load_ontology(config.ontology_path)
    translator = _build_translator(config.translator)
    classifier = Classifier(
        model_set,
        ontology,
        translator=translator,
        min_keyword_hits=config.min_keyword_hits,
    )
    store = CommunityStore(config.community_dir)
    feedback = FeedbackStore(config.suggestions_path)
    aggregation = config.aggregation_config()
    targets = json.loads(
        (Path(__file__).parent / "data" / "sdg_targets.json").read_text(encoding="utf-8")
    )
    started = time.monotonic()
    model_version = model_set.format_version
    app = FastAPI(title="osdg service", version=__version__)
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > config.max_request_bytes:
            return JSONResponse(
                status_code=413,
                content={"code": "RequestTooLarge", "message": "request body too large"},
            )
        return await call_next(request)

    @app.exception_handler(OsdgError)
    async def osdg_error_handler(request: Request, err: OsdgError):
        status = _STATUS_BY_CODE.get(err.code, 400)
        body = {"code": err.code, "message": err.message}
        if isinstance(err, TaskRetired):
            body["substitute_task_id"] = err.substitute_task_id
        if isinstance(err, OpenSessionExists):
            body["session_id"] = err.session_id
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(Exception)
    async def unexpected_error_handler(request: Request, err: Exception):
        logger.exception("unhandled error on %s", request.url.path)
        return JSONResponse(
            status_code=500, content={"code": "InternalError", "message": "internal error"}
        )

    @app.get("/health")
    def health():
        return {
            "model_version": model_version,
            "ontology_version": ontology.version,
            "uptime_seconds": time.monotonic() - started,
        }

    @app.post("/api/v1/classify")
    def classify(body: ClassifyRequest):
        result = classifier.classify_text(body.text, body.language)
        return result.to_dict()

    @app.post("/api/v1/classify-document")
    async def classify_document(file: UploadFile = File(...), language: str = Form("en")):
        content_type = (file.content_type or "").split(";")[0].strip().lower()
        payload = await file.read()
        if content_type == "application/pdf":
            text = extract_pdf_text(payload, config.pdf_extractor_command)
            if not text.strip():
                raise EmptyExtraction("extractor produced empty text")
        elif content_type == "text/plain":
            text = payload.decode("utf-8", errors="replace")
        else:
            return JSONResponse(
                status_code=415,
                content={
                    "code": "UnsupportedMediaType",
                    "message": f"unsupported media type {content_type!r}",
                },
            )
        result = classifier.classify_document(text, language, aggregation)
        return result.to_dict()

    @app.post("/api/v1/suggestions", status_code=202)
    def suggest(body: SuggestionRequest):
        if not body.text.strip():
            raise EmptyText("suggestion text is empty")
        if not body.suggested_sdgs:
            raise EmptySuggestion("suggested_sdgs is empty")
        suggestion_id = record_suggestion(
            feedback,
            input_hash=input_digest(body.text),
            text=body.text,
            suggested_sdgs=set(body.suggested_sdgs),
            note=body.note,
        )
        return {"suggestion_id": suggestion_id}

    @app.post("/api/v1/sessions")
    def create_session(body: SessionRequest):
        if body.mode == "intro":
            session = store.start_intro(body.volunteer_id)
        elif body.mode == "mixed":
            session = store.start_session(body.volunteer_id, "mixed", seed=body.seed)
        elif body.mode == "sdg":
            if body.sdg is None:
                raise DataError("mode 'sdg' requires the 'sdg' field")
            session = store.start_session(body.volunteer_id, body.sdg, seed=body.seed)
        else:
            raise DataError(f"unknown mode {body.mode!r}")
        return session.to_dict()

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return store.get_session(session_id).to_dict()

    @app.get("/api/v1/sessions/{session_id}/next")
    def next_task(session_id: str):
        return store.next_task(session_id)

    @app.post("/api/v1/sessions/{session_id}/votes")
    def vote(session_id: str, body: VoteRequest):
        return store.record_vote(session_id, body.task_id, body.decision)

    @app.get("/api/v1/volunteers/{volunteer_id}/intro-stats")
    def intro_stats(volunteer_id: str):
        return {"volunteer_id": volunteer_id, "tasks": store.intro_stats(volunteer_id)}

    @app.get("/api/v1/volunteers/{volunteer_id}/status")
    def volunteer_status(volunteer_id: str):
        session = store.open_session_for(volunteer_id)
        volunteer = store.volunteers.get(volunteer_id)
        return {
            "volunteer_id": volunteer_id,
            "onboarded": bool(volunteer and volunteer.onboarded),
            "open_session": session.to_dict() if session else None,
        }

    @app.get("/api/v1/sdg-targets")
    def sdg_targets():
        return targets

    return app


def run(config: ServiceConfig):
    import uvicorn

    host, _, port = config.listen.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
