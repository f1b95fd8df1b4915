"""Labeling-platform backend: volunteers validate (snippet, SDG) pairs.

State model: an append-only vote log is the source of truth; task tallies,
volunteer progress and session cursors are all derived by replay. Intro
exercise votes live in a separate log and never reach the public tallies
or the dataset export.
"""

import csv
import json
import logging
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from osdg.corpus import CSV_COLUMNS, Corpus, make_snippet, recompute_agreement, write_corpus
from osdg.errors import (
    AlreadyOnboarded,
    DataError,
    DuplicateVote,
    IntroIncomplete,
    MalformedHeader,
    NoEligibleTasks,
    NotOnboarded,
    OpenSessionExists,
    OutOfOrderVote,
    SessionComplete,
    TaskRetired,
    UnknownSession,
    UnknownTask,
)
from osdg.sdg import validate_sdg

logger = logging.getLogger(__name__)

VOTE_CAP = 9
SESSION_SIZE = 100
STOP_INTERVAL = 20
INTRO_SIZE = 10

ACCEPT = "accept"
REJECT = "reject"

MODE_MIXED = "mixed"


def compute_agreement(accepts: int, rejects: int) -> float:
    """Normalized majority margin |A-R|/(A+R) in [0,1]; needs >= 1 vote."""
    return recompute_agreement(accepts, rejects)


@dataclass
class LabelTask:
    task_id: str
    text: str
    candidate_sdg: int
    accepts: int = 0
    rejects: int = 0
    source_ref: str | None = None

    @property
    def total_votes(self) -> int:
        return self.accepts + self.rejects

    @property
    def retired(self) -> bool:
        return self.total_votes >= VOTE_CAP


@dataclass
class Session:
    session_id: str
    volunteer_id: str
    kind: str  # "intro" | "standard"
    mode: str  # "mixed" or "sdg:<n>" ("intro" sessions use "intro")
    task_ids: list[str]
    seed: int
    cursor: int = 0
    completed_at: float | None = None

    @property
    def complete(self) -> bool:
        return self.cursor >= len(self.task_ids)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "volunteer_id": self.volunteer_id,
            "kind": self.kind,
            "mode": self.mode,
            "size": len(self.task_ids),
            "cursor": self.cursor,
            "complete": self.complete,
        }


@dataclass
class _Volunteer:
    volunteer_id: str
    intro_voted: set = field(default_factory=set)
    voted_task_ids: set = field(default_factory=set)

    @property
    def onboarded(self) -> bool:
        return len(self.intro_voted) >= INTRO_SIZE


def _mode_string(mode: str | int) -> str:
    if mode == MODE_MIXED:
        return MODE_MIXED
    return f"sdg:{validate_sdg(mode)}"


def load_task_pool(path: str | Path) -> list[LabelTask]:
    """Read a snippet pool CSV (corpus column layout, counts ignored).

    SDG 17 rows are skipped: validation for that goal is on hold.
    """
    path = Path(path)
    tasks: list[LabelTask] = []
    seen: set[str] = set()
    skipped_17 = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_COLUMNS:
            raise MalformedHeader(f"{path}: expected columns {CSV_COLUMNS}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c for c in row):
                continue
            record = dict(zip(CSV_COLUMNS, row))
            sdg = validate_sdg(record["sdg"])
            if sdg == 17:
                skipped_17 += 1
                continue
            if not record["text"].strip():
                raise DataError(f"{path}:{lineno}: empty snippet text")
            if record["text_id"] in seen:
                raise DataError(f"{path}:{lineno}: duplicate task_id {record['text_id']!r}")
            seen.add(record["text_id"])
            tasks.append(
                LabelTask(
                    task_id=record["text_id"],
                    text=record["text"],
                    candidate_sdg=sdg,
                    source_ref=record["doi"].strip() or None,
                )
            )
    if skipped_17:
        logger.warning("%s: skipped %d SDG-17 tasks (excluded by default)", path, skipped_17)
    return tasks


class CommunityStore:
    """File-backed store: task pool + intro config + append-only logs.

    All mutations run under one lock; the vote-cap check and the log append
    happen atomically, which is what keeps the 9-vote cap exact under
    concurrent voting.
    """

    POOL_FILE = "pool.csv"
    INTRO_FILE = "intro_tasks.json"
    VOTES_FILE = "votes.jsonl"
    INTRO_VOTES_FILE = "intro_votes.jsonl"
    SESSIONS_FILE = "sessions.jsonl"

    def __init__(self, store_dir: str | Path):
        self.dir = Path(store_dir)
        pool_path = self.dir / self.POOL_FILE
        intro_path = self.dir / self.INTRO_FILE
        if not pool_path.exists():
            raise FileNotFoundError(pool_path)
        if not intro_path.exists():
            raise FileNotFoundError(intro_path)
        self._lock = threading.RLock()
        self.tasks: dict[str, LabelTask] = {
            t.task_id: t for t in load_task_pool(pool_path)
        }
        self.intro_task_ids: list[str] = json.loads(intro_path.read_text(encoding="utf-8"))
        if len(self.intro_task_ids) != INTRO_SIZE:
            raise DataError(
                f"{intro_path}: expected {INTRO_SIZE} intro task ids, got {len(self.intro_task_ids)}"
            )
        for task_id in self.intro_task_ids:
            if task_id not in self.tasks:
                raise DataError(f"{intro_path}: unknown intro task {task_id!r}")
        self.volunteers: dict[str, _Volunteer] = {}
        self.sessions: dict[str, Session] = {}
        # intro accept/total tallies per task, across all volunteers
        self.intro_tally: dict[str, list[int]] = {}
        self.intro_decisions: dict[tuple[str, str], str] = {}
        self._replay()
        self._votes_fh = (self.dir / self.VOTES_FILE).open("a", encoding="utf-8")
        self._intro_fh = (self.dir / self.INTRO_VOTES_FILE).open("a", encoding="utf-8")
        self._sessions_fh = (self.dir / self.SESSIONS_FILE).open("a", encoding="utf-8")

    @classmethod
    def initialize(
        cls, store_dir: str | Path, pool_csv: str | Path, intro_task_ids: list[str]
    ) -> "CommunityStore":
        """Create the store layout from a pool file and the intro task list."""
        store_dir = Path(store_dir)
        store_dir.mkdir(parents=True, exist_ok=True)
        pool_target = store_dir / cls.POOL_FILE
        if Path(pool_csv) != pool_target:
            pool_target.write_text(Path(pool_csv).read_text(encoding="utf-8"), encoding="utf-8")
        (store_dir / cls.INTRO_FILE).write_text(json.dumps(intro_task_ids), encoding="utf-8")
        return cls(store_dir)

    def close(self):
        for fh in (self._votes_fh, self._intro_fh, self._sessions_fh):
            fh.close()

    # --- replay -------------------------------------------------------------

    def _volunteer(self, volunteer_id: str) -> _Volunteer:
        if volunteer_id not in self.volunteers:
            self.volunteers[volunteer_id] = _Volunteer(volunteer_id=volunteer_id)
        return self.volunteers[volunteer_id]

    def _read_jsonl(self, name: str) -> list[dict]:
        path = self.dir / name
        if not path.exists():
            return []
        with path.open(encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def _replay(self) -> None:
        for event in self._read_jsonl(self.SESSIONS_FILE):
            if event["type"] == "session":
                self.sessions[event["session_id"]] = Session(
                    session_id=event["session_id"],
                    volunteer_id=event["volunteer_id"],
                    kind=event["kind"],
                    mode=event["mode"],
                    task_ids=list(event["task_ids"]),
                    seed=event["seed"],
                )
            elif event["type"] == "substitute":
                session = self.sessions[event["session_id"]]
                if event["new_task_id"] is None:
                    session.task_ids.pop(event["position"])
                else:
                    session.task_ids[event["position"]] = event["new_task_id"]
        for vote in self._read_jsonl(self.INTRO_VOTES_FILE):
            self._apply_intro_vote(vote)
        for vote in self._read_jsonl(self.VOTES_FILE):
            self._apply_public_vote(vote)

    def _apply_intro_vote(self, vote: dict) -> None:
        volunteer = self._volunteer(vote["volunteer_id"])
        volunteer.intro_voted.add(vote["task_id"])
        tally = self.intro_tally.setdefault(vote["task_id"], [0, 0])
        tally[1] += 1
        if vote["decision"] == ACCEPT:
            tally[0] += 1
        self.intro_decisions[(vote["volunteer_id"], vote["task_id"])] = vote["decision"]
        session = self.sessions.get(vote["session_id"])
        if session is not None:
            session.cursor += 1

    def _apply_public_vote(self, vote: dict) -> None:
        volunteer = self._volunteer(vote["volunteer_id"])
        volunteer.voted_task_ids.add(vote["task_id"])
        task = self.tasks[vote["task_id"]]
        if vote["decision"] == ACCEPT:
            task.accepts += 1
        else:
            task.rejects += 1
        session = self.sessions.get(vote["session_id"])
        if session is not None:
            session.cursor += 1

    def _append(self, fh, record: dict) -> None:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
        fh.flush()

    # --- intro flow -----------------------------------------------------------

    def start_intro(self, volunteer_id: str) -> Session:
        with self._lock:
            volunteer = self._volunteer(volunteer_id)
            if volunteer.onboarded:
                raise AlreadyOnboarded(f"{volunteer_id} already completed the intro")
            existing = self._open_session(volunteer_id, kind="intro")
            if existing is not None:
                return existing
            session = Session(
                session_id=uuid.uuid4().hex[:12],
                volunteer_id=volunteer_id,
                kind="intro",
                mode="intro",
                task_ids=list(self.intro_task_ids),
                seed=0,
            )
            self.sessions[session.session_id] = session
            self._append(
                self._sessions_fh,
                {
                    "type": "session",
                    "session_id": session.session_id,
                    "volunteer_id": volunteer_id,
                    "kind": "intro",
                    "mode": "intro",
                    "task_ids": session.task_ids,
                    "seed": 0,
                },
            )
            return session

    def intro_stats(self, volunteer_id: str) -> list[dict]:
        with self._lock:
            volunteer = self._volunteer(volunteer_id)
            if not volunteer.onboarded:
                raise IntroIncomplete(f"{volunteer_id} has not finished the intro exercise")
            stats = []
            for task_id in self.intro_task_ids:
                accepts, total = self.intro_tally.get(task_id, [0, 0])
                stats.append(
                    {
                        "task_id": task_id,
                        "my_decision": self.intro_decisions[(volunteer_id, task_id)],
                        "community_accept_fraction": accepts / total if total else 0.0,
                    }
                )
            return stats

    # --- sessions -------------------------------------------------------------

    def _open_session(self, volunteer_id: str, kind: str) -> Session | None:
        for session in self.sessions.values():
            if (
                session.volunteer_id == volunteer_id
                and session.kind == kind
                and not session.complete
            ):
                return session
        return None

    def _eligible_tasks(self, volunteer: _Volunteer, mode: str) -> list[LabelTask]:
        intro_ids = set(self.intro_task_ids)
        wanted_sdg = int(mode.split(":", 1)[1]) if mode.startswith("sdg:") else None
        out = []
        for task in self.tasks.values():
            if task.task_id in intro_ids:
                continue
            if task.retired or task.task_id in volunteer.voted_task_ids:
                continue
            if wanted_sdg is not None and task.candidate_sdg != wanted_sdg:
                continue
            out.append(task)
        return out

    def start_session(
        self, volunteer_id: str, mode: str | int = MODE_MIXED, seed: int | None = None
    ) -> Session:
        mode_str = _mode_string(mode)
        with self._lock:
            volunteer = self._volunteer(volunteer_id)
            if not volunteer.onboarded:
                raise NotOnboarded(f"{volunteer_id} must finish the intro exercise first")
            existing = self._open_session(volunteer_id, kind="standard")
            if existing is not None:
                raise OpenSessionExists(
                    f"{volunteer_id} already has an open session", session_id=existing.session_id
                )
            eligible = self._eligible_tasks(volunteer, mode_str)
            if not eligible:
                raise NoEligibleTasks(f"no tasks left for {volunteer_id} in mode {mode_str}")
            if seed is None:
                seed = random.SystemRandom().randrange(2**31)
            order = sorted(eligible, key=lambda t: t.task_id)
            random.Random(seed).shuffle(order)
            session = Session(
                session_id=uuid.uuid4().hex[:12],
                volunteer_id=volunteer_id,
                kind="standard",
                mode=mode_str,
                task_ids=[t.task_id for t in order[:SESSION_SIZE]],
                seed=seed,
            )
            self.sessions[session.session_id] = session
            self._append(
                self._sessions_fh,
                {
                    "type": "session",
                    "session_id": session.session_id,
                    "volunteer_id": volunteer_id,
                    "kind": "standard",
                    "mode": mode_str,
                    "task_ids": session.task_ids,
                    "seed": seed,
                },
            )
            return session

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"unknown session {session_id!r}")
            return session

    def open_session_for(self, volunteer_id: str) -> Session | None:
        """The volunteer's open session (intro or standard), if any."""
        with self._lock:
            return self._open_session(volunteer_id, "intro") or self._open_session(
                volunteer_id, "standard"
            )

    def next_task(self, session_id: str) -> dict:
        """Current task + position; flags the break after every 20th vote."""
        with self._lock:
            session = self.get_session(session_id)
            if session.complete:
                return {"complete": True, "session": session.to_dict()}
            task = self.tasks[session.task_ids[session.cursor]]
            is_stop_point = (
                session.cursor > 0
                and session.cursor % STOP_INTERVAL == 0
                and session.cursor < len(session.task_ids)
            )
            return {
                "complete": False,
                "task": {
                    "task_id": task.task_id,
                    "text": task.text,
                    "candidate_sdg": task.candidate_sdg,
                },
                "position": session.cursor + 1,
                "total": len(session.task_ids),
                "is_stop_point": is_stop_point,
            }

    def _substitute(self, session: Session, volunteer: _Volunteer) -> str | None:
        in_session = set(session.task_ids)
        candidates = [
            t
            for t in self._eligible_tasks(volunteer, session.mode)
            if t.task_id not in in_session
        ]
        if not candidates:
            session.task_ids.pop(session.cursor)
            self._append(
                self._sessions_fh,
                {
                    "type": "substitute",
                    "session_id": session.session_id,
                    "position": session.cursor,
                    "new_task_id": None,
                },
            )
            return None
        replacement = min(candidates, key=lambda t: t.task_id)
        session.task_ids[session.cursor] = replacement.task_id
        self._append(
            self._sessions_fh,
            {
                "type": "substitute",
                "session_id": session.session_id,
                "position": session.cursor,
                "new_task_id": replacement.task_id,
            },
        )
        return replacement.task_id

    def record_vote(self, session_id: str, task_id: str, decision: str) -> dict:
        """Atomic check-and-append; advances the session cursor on success."""
        if decision not in (ACCEPT, REJECT):
            raise DataError(f"decision must be '{ACCEPT}' or '{REJECT}', got {decision!r}")
        with self._lock:
            session = self.get_session(session_id)
            if session.complete:
                raise SessionComplete(f"session {session_id} is already complete")
            current_id = session.task_ids[session.cursor]
            if task_id != current_id:
                raise OutOfOrderVote(
                    f"vote for {task_id!r} but the current task is {current_id!r}"
                )
            if task_id not in self.tasks:
                raise UnknownTask(task_id)
            volunteer = self._volunteer(session.volunteer_id)
            task = self.tasks[task_id]
            record = {
                "volunteer_id": session.volunteer_id,
                "task_id": task_id,
                "decision": decision,
                "timestamp": time.time(),
                "session_id": session_id,
            }
            if session.kind == "intro":
                if task_id in volunteer.intro_voted:
                    raise DuplicateVote(f"{session.volunteer_id} already voted on {task_id}")
                self._append(self._intro_fh, record)
                self._apply_intro_vote(record)
            else:
                if task_id in volunteer.voted_task_ids:
                    raise DuplicateVote(f"{session.volunteer_id} already voted on {task_id}")
                if task.retired:
                    substitute = self._substitute(session, volunteer)
                    raise TaskRetired(
                        f"task {task_id} reached the {VOTE_CAP}-vote cap",
                        substitute_task_id=substitute,
                    )
                self._append(self._votes_fh, record)
                self._apply_public_vote(record)
            if session.complete and session.completed_at is None:
                session.completed_at = record["timestamp"]
            if session.kind == "intro":
                return {"accepted": True, "position": session.cursor, "complete": session.complete}
            return {
                "accepted": True,
                "task_id": task_id,
                "accepts": task.accepts,
                "rejects": task.rejects,
                "position": session.cursor,
                "complete": session.complete,
            }

    # --- export ---------------------------------------------------------------

    def export_dataset(self, min_validators: int = 3) -> Corpus:
        """Tasks validated by at least ``min_validators`` volunteers, ordered
        by task id, with the agreement score recomputed from the tallies."""
        with self._lock:
            rows = [
                make_snippet(
                    text_id=t.task_id,
                    text=t.text,
                    sdg=t.candidate_sdg,
                    labels_positive=t.accepts,
                    labels_negative=t.rejects,
                    source_ref=t.source_ref,
                )
                for t in sorted(self.tasks.values(), key=lambda t: t.task_id)
                if t.total_votes >= min_validators
            ]
        return Corpus(snippets=rows)


def export_dataset(store: CommunityStore, min_validators: int = 3) -> Corpus:
    return store.export_dataset(min_validators)


def export_dataset_csv(store: CommunityStore, path: str | Path, min_validators: int = 3) -> int:
    corpus = store.export_dataset(min_validators)
    write_corpus(corpus, path)
    return len(corpus)
