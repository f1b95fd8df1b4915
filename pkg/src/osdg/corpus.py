"""Loading, validation, filtering and splitting of labeled snippet corpora.

File format is the community dataset CSV: one row per (text, candidate SDG)
pair with volunteer vote counts and the derived agreement score. Column
layout matches the public quarterly releases:

    doi,text_id,text,sdg,labels_negative,labels_positive,agreement
"""

import csv
import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from osdg.errors import (
    AgreementMismatch,
    DataError,
    DuplicateRow,
    EmptyText,
    InvalidSdg,
    MalformedHeader,
    StratifyError,
)
from osdg.sdg import validate_sdg

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["doi", "text_id", "text", "sdg", "labels_negative", "labels_positive", "agreement"]

AGREEMENT_TOLERANCE = 1e-9


def recompute_agreement(labels_positive: int, labels_negative: int) -> float:
    """Normalized majority margin |P-N|/(P+N); requires at least one vote."""
    total = labels_positive + labels_negative
    if total < 1:
        raise DataError("agreement undefined with zero votes")
    return abs(labels_positive - labels_negative) / total


@dataclass(frozen=True)
class LabeledSnippet:
    text_id: str
    text: str
    sdg: int
    labels_positive: int
    labels_negative: int
    agreement: float
    source_ref: str | None = None

    def positive_majority(self) -> bool:
        return self.labels_positive > self.labels_negative


def make_snippet(
    text_id: str,
    text: str,
    sdg: int,
    labels_positive: int,
    labels_negative: int,
    source_ref: str | None = None,
) -> LabeledSnippet:
    """Build a snippet with the agreement score recomputed from the counts."""
    if not text or not text.strip():
        raise EmptyText(f"snippet {text_id!r} has empty text")
    return LabeledSnippet(
        text_id=text_id,
        text=text,
        sdg=validate_sdg(sdg),
        labels_positive=int(labels_positive),
        labels_negative=int(labels_negative),
        agreement=recompute_agreement(int(labels_positive), int(labels_negative)),
        source_ref=source_ref or None,
    )


@dataclass
class Corpus:
    snippets: list[LabeledSnippet]
    by_sdg_index: dict[int, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.by_sdg_index:
            index: dict[int, list[int]] = {}
            for i, s in enumerate(self.snippets):
                index.setdefault(s.sdg, []).append(i)
            self.by_sdg_index = index

    def __len__(self):
        return len(self.snippets)

    def texts(self) -> list[str]:
        return [s.text for s in self.snippets]


def _parse_row(row: dict[str, str], lineno: int) -> LabeledSnippet:
    text = row["text"]
    if not text or not text.strip():
        raise EmptyText(f"row {lineno}: empty text")
    try:
        sdg = validate_sdg(row["sdg"])
    except InvalidSdg:
        raise InvalidSdg(f"row {lineno}: invalid sdg {row['sdg']!r}") from None
    try:
        pos = int(row["labels_positive"])
        neg = int(row["labels_negative"])
    except ValueError:
        raise DataError(
            f"row {lineno}: non-integer vote counts "
            f"({row['labels_positive']!r}, {row['labels_negative']!r})"
        ) from None
    if pos < 0 or neg < 0:
        raise DataError(f"row {lineno}: negative vote count")
    if pos + neg < 1:
        raise DataError(f"row {lineno}: zero votes")
    try:
        agreement = float(row["agreement"])
    except ValueError:
        raise DataError(f"row {lineno}: non-numeric agreement {row['agreement']!r}") from None
    expected = recompute_agreement(pos, neg)
    if abs(agreement - expected) > AGREEMENT_TOLERANCE:
        raise AgreementMismatch(
            f"row {lineno}: agreement {agreement} does not match recomputed {expected}"
        )
    return LabeledSnippet(
        text_id=row["text_id"],
        text=text,
        sdg=sdg,
        labels_positive=pos,
        labels_negative=neg,
        agreement=agreement,
        source_ref=row["doi"].strip() or None,
    )


def load_community_dataset(path: str | Path, strict: bool = True) -> Corpus:
    """Parse a community-dataset CSV into a Corpus.

    Strict mode aborts on the first invariant violation and recomputes the
    agreement score; lenient mode drops violating rows (counted in the log)
    and trusts the stored score when it is within tolerance.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    snippets: list[LabeledSnippet] = []
    seen: dict[tuple[str, int], int] = {}
    text_id_sdgs: dict[str, int] = {}
    dropped = 0
    multi_label_ids = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path}: file is empty (no header)") from None
        if [h.strip() for h in header] != CSV_COLUMNS:
            raise MalformedHeader(f"{path}: expected columns {CSV_COLUMNS}, got {header}")
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c for c in raw):
                continue
            try:
                if len(raw) != len(CSV_COLUMNS):
                    raise DataError(
                        f"row {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(raw)}"
                    )
                snippet = _parse_row(dict(zip(CSV_COLUMNS, raw)), lineno)
                key = (snippet.text_id, snippet.sdg)
                if key in seen:
                    raise DuplicateRow(
                        f"row {lineno}: duplicate (text_id, sdg) first seen at row {seen[key]}"
                    )
            except DataError as err:
                if strict:
                    raise
                dropped += 1
                logger.debug("dropping row %d: %s", lineno, err)
                continue
            if strict:
                # strict mode stores the recomputed score, not the file's
                snippet = LabeledSnippet(
                    text_id=snippet.text_id,
                    text=snippet.text,
                    sdg=snippet.sdg,
                    labels_positive=snippet.labels_positive,
                    labels_negative=snippet.labels_negative,
                    agreement=recompute_agreement(
                        snippet.labels_positive, snippet.labels_negative
                    ),
                    source_ref=snippet.source_ref,
                )
            seen[key] = lineno
            if snippet.text_id in text_id_sdgs and text_id_sdgs[snippet.text_id] != snippet.sdg:
                multi_label_ids += 1
            text_id_sdgs[snippet.text_id] = snippet.sdg
            snippets.append(snippet)
    if not snippets:
        logger.warning("%s: loaded 0 rows", path)
    if dropped:
        logger.warning("%s: dropped %d invalid rows (lenient mode)", path, dropped)
    if multi_label_ids:
        logger.warning(
            "%s: %d text_ids appear under more than one candidate SDG", path, multi_label_ids
        )
    return Corpus(snippets=snippets)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write in the load format; row order preserved, floats at full precision."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for s in corpus.snippets:
            writer.writerow(
                [
                    s.source_ref or "",
                    s.text_id,
                    s.text,
                    s.sdg,
                    s.labels_negative,
                    s.labels_positive,
                    repr(s.agreement),
                ]
            )


def filter_high_agreement(
    corpus: Corpus, min_agreement: float, require_positive_majority: bool = False
) -> Corpus:
    """Keep rows with agreement >= threshold (and optionally a positive majority)."""
    if not 0 <= min_agreement <= 1:
        raise ValueError(f"min_agreement must be in [0,1], got {min_agreement}")
    kept = [
        s
        for s in corpus.snippets
        if s.agreement >= min_agreement
        and (not require_positive_majority or s.positive_majority())
    ]
    return Corpus(snippets=kept)


def split(corpus: Corpus, test_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic per-SDG stratified split into (train, test)."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
    small = [sdg for sdg, idx in corpus.by_sdg_index.items() if len(idx) < 2]
    if small:
        raise StratifyError(f"cannot stratify: SDGs with < 2 rows: {sorted(small)}")
    rng = random.Random(seed)
    test_indices: set[int] = set()
    for sdg in sorted(corpus.by_sdg_index):
        indices = list(corpus.by_sdg_index[sdg])
        rng.shuffle(indices)
        n_test = int(math.floor(test_fraction * len(indices) + 0.5))
        test_indices.update(indices[:n_test])
    train = [s for i, s in enumerate(corpus.snippets) if i not in test_indices]
    test = [s for i, s in enumerate(corpus.snippets) if i in test_indices]
    return Corpus(snippets=train), Corpus(snippets=test)
