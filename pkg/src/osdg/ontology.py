"""Per-SDG keyword map and multi-pattern phrase matching over token sequences.

The keyword stage is the auditable half of the classifier: a label needs a
verbatim phrase hit ("smoking-gun" evidence) on top of the model score, so
matching is exact over normalized tokens, with no stemming.
"""

import csv
import logging
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from pathlib import Path

from osdg.errors import DataError, InvalidSdg, MalformedHeader
from osdg.sdg import validate_sdg

logger = logging.getLogger(__name__)

MAX_PHRASE_TOKENS = 8

# Maximal runs of letters/digits; underscore is a separator like punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class Token:
    text: str
    start: int  # character offset into the original string
    end: int

    def __str__(self):
        return self.text


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into lowercase letter/digit tokens with char offsets."""
    if not text:
        return []
    return [Token(m.group(0).casefold(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class OntologyTerm:
    sdg: int
    phrase: tuple[str, ...]  # 1..8 lowercase tokens
    term_id: str


@dataclass(frozen=True)
class KeywordMatch:
    sdg: int
    term_id: str
    start_token: int
    end_token: int  # exclusive

    def to_dict(self) -> dict:
        return {
            "sdg": self.sdg,
            "term_id": self.term_id,
            "start_token": self.start_token,
            "end_token": self.end_token,
        }


@dataclass
class Ontology:
    terms: list[OntologyTerm]
    version: str = "unversioned"
    _matcher: "TokenMatcher" = field(default=None, repr=False, compare=False)

    def matcher(self) -> "TokenMatcher":
        if self._matcher is None:
            self._matcher = TokenMatcher(self.terms)
        return self._matcher

    def sdgs(self) -> set[int]:
        return {t.sdg for t in self.terms}


def make_term(sdg: int, phrase_text: str) -> OntologyTerm:
    sdg = validate_sdg(sdg)
    tokens = tuple(t.text for t in tokenize(phrase_text))
    if not tokens:
        raise DataError(f"empty term for SDG {sdg}: {phrase_text!r}")
    if len(tokens) > MAX_PHRASE_TOKENS:
        raise DataError(
            f"term longer than {MAX_PHRASE_TOKENS} tokens for SDG {sdg}: {phrase_text!r}"
        )
    return OntologyTerm(sdg=sdg, phrase=tokens, term_id=f"{sdg}:{' '.join(tokens)}")


def load_ontology(path: str | Path, version: str | None = None) -> Ontology:
    """Load a `sdg,term` CSV; duplicates collapse with a warning."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path}: empty ontology file") from None
        if [h.strip().lower() for h in header] != ["sdg", "term"]:
            raise MalformedHeader(f"{path}: expected header 'sdg,term', got {header!r}")
        terms: list[OntologyTerm] = []
        seen: set[tuple[int, tuple[str, ...]]] = set()
        duplicates = 0
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                term = make_term(row[0].strip(), row[1])
            except InvalidSdg:
                raise InvalidSdg(f"{path}:{lineno}: invalid sdg {row[0]!r}") from None
            key = (term.sdg, term.phrase)
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            terms.append(term)
    if duplicates:
        logger.warning("%s: collapsed %d duplicate ontology rows", path, duplicates)
    ontology = Ontology(terms=terms, version=version or path.stem)
    missing = [s for s in range(1, 17) if s not in ontology.sdgs()]
    if missing:
        logger.warning("%s: no ontology terms for SDGs %s", path, missing)
    return ontology


class TokenMatcher:
    """Aho-Corasick automaton over token strings (not characters).

    States are dict transitions keyed by token text; built once, then
    immutable, so concurrent ``find`` calls are safe.
    """

    def __init__(self, terms: list[OntologyTerm]):
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._output: list[list[OntologyTerm]] = [[]]
        for term in terms:
            self._add(term)
        self._build_failure_links()

    def _add(self, term: OntologyTerm) -> None:
        state = 0
        for tok in term.phrase:
            nxt = self._goto[state].get(tok)
            if nxt is None:
                nxt = len(self._goto)
                self._goto.append({})
                self._fail.append(0)
                self._output.append([])
                self._goto[state][tok] = nxt
            state = nxt
        self._output[state].append(term)

    def _build_failure_links(self) -> None:
        queue = deque()
        for state in self._goto[0].values():
            self._fail[state] = 0
            queue.append(state)
        while queue:
            state = queue.popleft()
            for tok, nxt in self._goto[state].items():
                queue.append(nxt)
                fall = self._fail[state]
                while fall and tok not in self._goto[fall]:
                    fall = self._fail[fall]
                self._fail[nxt] = self._goto[fall].get(tok, 0)
                self._output[nxt] = self._output[nxt] + self._output[self._fail[nxt]]

    def find(self, tokens: list[str]) -> list[KeywordMatch]:
        """All phrase occurrences; longest-per-(sdg, start); sorted."""
        state = 0
        # (sdg, start) -> longest match seen there
        best: dict[tuple[int, int], KeywordMatch] = {}
        for pos, tok in enumerate(tokens):
            while state and tok not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(tok, 0)
            for term in self._output[state]:
                start = pos - len(term.phrase) + 1
                match = KeywordMatch(
                    sdg=term.sdg, term_id=term.term_id, start_token=start, end_token=pos + 1
                )
                key = (term.sdg, start)
                prior = best.get(key)
                if prior is None or match.end_token > prior.end_token:
                    best[key] = match
        return sorted(best.values(), key=lambda m: (m.start_token, m.sdg, m.end_token))


def match_keywords(text: str, ontology: Ontology) -> list[KeywordMatch]:
    """Find every ontology phrase occurring as a contiguous token run."""
    tokens = [t.text for t in tokenize(text)]
    return ontology.matcher().find(tokens)


def evidence_sdgs(matches: list[KeywordMatch], min_hits: int = 1) -> set[int]:
    """SDGs backed by at least ``min_hits`` keyword matches."""
    if min_hits < 1:
        raise ValueError("min_hits must be >= 1")
    counts: dict[int, int] = defaultdict(int)
    for m in matches:
        counts[m.sdg] += 1
    return {sdg for sdg, n in counts.items() if n >= min_hits}
