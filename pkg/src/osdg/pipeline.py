"""The two-stage classifier: model screening gated by keyword evidence,
plus document chunking/aggregation and the label-suggestion feedback store.

A final label needs both stages to agree: the per-SDG probability must
clear the model threshold AND the ontology must produce keyword evidence
for that SDG. Longer documents are chunked, each chunk classified, and the
per-SDG distribution reported only when enough of the document is related.
"""

import hashlib
import json
import math
import os
import re
import threading
import time
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from osdg.errors import EmptySuggestion, EmptyText
from osdg.models import OvrModelSet, ml_labels, predict_proba
from osdg.ontology import KeywordMatch, Ontology, evidence_sdgs, match_keywords
from osdg.sdg import validate_language, validate_sdg
from osdg.translate import TranslationCache, TranslationRequest, TranslatorBackend, translate_to_english


def input_digest(text: str) -> str:
    """sha256 over NFC-normalized, whitespace-collapsed text."""
    normalized = " ".join(unicodedata.normalize("NFC", text).split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class SdgAssessment:
    probability: float
    keyword_matches: tuple[KeywordMatch, ...]

    def to_dict(self) -> dict:
        return {
            "probability": self.probability,
            "keyword_matches": [m.to_dict() for m in self.keyword_matches],
        }


@dataclass(frozen=True)
class ClassificationResult:
    input_hash: str
    language: str
    translated: bool
    per_sdg: dict[int, SdgAssessment]
    final_labels: frozenset[int]
    most_relevant: int | None

    def to_dict(self) -> dict:
        return {
            "input_hash": self.input_hash,
            "language": self.language,
            "translated": self.translated,
            "per_sdg": {str(s): a.to_dict() for s, a in sorted(self.per_sdg.items())},
            "final_labels": sorted(self.final_labels),
            "most_relevant": self.most_relevant,
        }


@dataclass(frozen=True)
class AggregationConfig:
    relevance_threshold: float = 0.15  # minimum related share of chunks
    sdg_share_threshold: float = 0.10  # minimum share of related chunks per SDG
    chunk_sentences: tuple[int, int] = (3, 6)

    def __post_init__(self):
        for value in (self.relevance_threshold, self.sdg_share_threshold):
            if not 0 < value < 1:
                raise ValueError(f"threshold must be in (0,1), got {value}")


@dataclass(frozen=True)
class DocumentResult:
    chunk_count: int
    related_chunk_count: int
    related_fraction: float
    distribution: dict[int, float]
    per_chunk: tuple[ClassificationResult, ...]

    def to_dict(self) -> dict:
        return {
            "chunk_count": self.chunk_count,
            "related_chunk_count": self.related_chunk_count,
            "related_fraction": self.related_fraction,
            "distribution": {str(s): v for s, v in sorted(self.distribution.items())},
            "per_chunk": [r.to_dict() for r in self.per_chunk],
        }


# --- chunking ---------------------------------------------------------------

_PARAGRAPH_SPLIT = re.compile(r"\n\s*\n")
_TERMINAL_PUNCT = re.compile(r"[.!?]+")


def _sentence_spans(paragraph: str) -> list[tuple[int, int]]:
    """(start, end) spans; a boundary is terminal punctuation followed by
    whitespace and an uppercase letter or digit."""
    n = len(paragraph)
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _TERMINAL_PUNCT.finditer(paragraph):
        end = m.end()
        j = end
        while j < n and paragraph[j].isspace():
            j += 1
        if j == end or j >= n:
            continue
        if paragraph[j].isupper() or paragraph[j].isdigit():
            spans.append((start, end))
            start = j
    tail = paragraph[start:].strip()
    if tail:
        lead = len(paragraph[start:]) - len(paragraph[start:].lstrip())
        spans.append((start + lead, start + lead + len(paragraph[start:].strip())))
    return spans


def _window_sizes(n_sentences: int, max_size: int) -> list[int]:
    windows = math.ceil(n_sentences / max_size)
    base, extra = divmod(n_sentences, windows)
    return [base + 1] * extra + [base] * (windows - extra)


def chunk_document(text: str, config: AggregationConfig | None = None) -> list[str]:
    """Blank-line paragraphs; long paragraphs become consecutive windows of
    3-6 sentences. No text is lost except whitespace."""
    config = config or AggregationConfig()
    _, max_sents = config.chunk_sentences
    chunks: list[str] = []
    for paragraph in _PARAGRAPH_SPLIT.split(text or ""):
        stripped = paragraph.strip()
        if not stripped:
            continue
        spans = _sentence_spans(paragraph)
        if len(spans) <= max_sents:
            chunks.append(stripped)
            continue
        pos = 0
        for size in _window_sizes(len(spans), max_sents):
            begin = spans[pos][0]
            end = spans[pos + size - 1][1]
            chunks.append(paragraph[begin:end].strip())
            pos += size
    return chunks


# --- classification ---------------------------------------------------------


class Classifier:
    """Binds a model set, an ontology and an optional translator.

    Pure per call once constructed; safe to share across threads.
    """

    def __init__(
        self,
        model_set: OvrModelSet,
        ontology: Ontology,
        translator: TranslatorBackend | None = None,
        cache: TranslationCache | None = None,
        min_keyword_hits: int = 1,
    ):
        self.model_set = model_set
        self.ontology = ontology
        self.translator = translator
        self.cache = cache if cache is not None else TranslationCache()
        self.min_keyword_hits = min_keyword_hits

    def classify_text(self, text: str, language: str = "en") -> ClassificationResult:
        language = validate_language(language)
        if not text or not text.strip():
            raise EmptyText("cannot classify empty text")
        translated = language != "en"
        english = (
            translate_to_english(TranslationRequest(text, language), self.translator, self.cache)
            if translated
            else text
        )
        return self._classify_english(english, input_hash=input_digest(text), language=language,
                                      translated=translated)

    def _classify_english(
        self, english: str, input_hash: str, language: str, translated: bool
    ) -> ClassificationResult:
        probs = predict_proba(self.model_set, english)
        matches = match_keywords(english, self.ontology)
        model_stage = ml_labels(probs, self.model_set)
        keyword_stage = evidence_sdgs(matches, self.min_keyword_hits)
        final = frozenset(model_stage & keyword_stage)
        by_sdg: dict[int, list[KeywordMatch]] = {}
        for m in matches:
            by_sdg.setdefault(m.sdg, []).append(m)
        per_sdg = {
            sdg: SdgAssessment(
                probability=probs[sdg], keyword_matches=tuple(by_sdg.get(sdg, ()))
            )
            for sdg in sorted(probs)
        }
        most_relevant = None
        if final:
            most_relevant = min(final, key=lambda s: (-probs[s], s))
        return ClassificationResult(
            input_hash=input_hash,
            language=language,
            translated=translated,
            per_sdg=per_sdg,
            final_labels=final,
            most_relevant=most_relevant,
        )

    def classify_document(
        self, text: str, language: str = "en", config: AggregationConfig | None = None
    ) -> DocumentResult:
        """Chunk, classify each chunk, and aggregate the label distribution.

        Non-English documents are translated once up front so chunking sees
        the English sentence structure the models were trained on.
        """
        config = config or AggregationConfig()
        language = validate_language(language)
        if not text or not text.strip():
            raise EmptyText("cannot classify an empty document")
        translated = language != "en"
        english = (
            translate_to_english(TranslationRequest(text, language), self.translator, self.cache)
            if translated
            else text
        )
        chunks = chunk_document(english, config)
        if not chunks:
            raise EmptyText("document produced no chunks")
        results = [
            self._classify_english(
                chunk, input_hash=input_digest(chunk), language=language, translated=translated
            )
            for chunk in chunks
        ]
        return aggregate_chunks(results, config)


def aggregate_chunks(
    results: list[ClassificationResult], config: AggregationConfig | None = None
) -> DocumentResult:
    """Document-level label distribution from per-chunk results.

    A chunk counts as related iff its final label set is non-empty. The
    distribution is empty unless related chunks reach the relevance
    threshold (inclusive); each SDG needs at least the share threshold of
    related chunks (inclusive) to be kept, and kept shares renormalize to 1.
    """
    config = config or AggregationConfig()
    total = len(results)
    related = [r for r in results if r.final_labels]
    related_fraction = len(related) / total if total else 0.0
    distribution: dict[int, float] = {}
    if total and related and related_fraction >= config.relevance_threshold:
        counts: dict[int, int] = {}
        for r in related:
            for sdg in r.final_labels:
                counts[sdg] = counts.get(sdg, 0) + 1
        shares = {s: c / len(related) for s, c in counts.items()}
        kept = {s: v for s, v in shares.items() if v >= config.sdg_share_threshold}
        norm = sum(kept.values())
        if norm > 0:
            distribution = {s: v / norm for s, v in kept.items()}
    return DocumentResult(
        chunk_count=total,
        related_chunk_count=len(related),
        related_fraction=related_fraction,
        distribution=distribution,
        per_chunk=tuple(results),
    )


# --- suggestion capture ------------------------------------------------------


class FeedbackStore:
    """Append-only store for user label suggestions.

    Suggestions are collected for later review and never feed back into
    classification. Appends are serialized and flushed to disk.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._next_id = self._count_existing() + 1

    def _count_existing(self) -> int:
        if not self.path.exists():
            return 0
        with self.path.open(encoding="utf-8") as fh:
            return sum(1 for line in fh if line.strip())

    def append(self, record: dict) -> int:
        with self._lock:
            record = dict(record, id=self._next_id)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._next_id += 1
            return record["id"]

    def records(self) -> list[dict]:
        if not self.path.exists():
            return []
        with self.path.open(encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]


def record_suggestion(
    store: FeedbackStore,
    input_hash: str,
    text: str,
    suggested_sdgs: set[int],
    note: str | None = None,
) -> int:
    """Durably store a user's alternative labels; returns a monotonic id."""
    if not suggested_sdgs:
        raise EmptySuggestion("a suggestion needs at least one SDG")
    sdgs = sorted(validate_sdg(s) for s in suggested_sdgs)
    return store.append(
        {
            "input_hash": input_hash,
            "text": text,
            "suggested_sdgs": sdgs,
            "note": note,
            "timestamp": time.time(),
        }
    )
