import json
import threading
from fractions import Fraction

import pytest

from osdg.community import (
    ACCEPT,
    REJECT,
    CommunityStore,
    compute_agreement,
    export_dataset_csv,
    load_task_pool,
)
from osdg.corpus import load_community_dataset
from osdg.datagen import write_task_pool
from osdg.errors import (
    AlreadyOnboarded,
    DataError,
    IntroIncomplete,
    NoEligibleTasks,
    NotOnboarded,
    OpenSessionExists,
    OutOfOrderVote,
    TaskRetired,
)

import random


def make_store(tmp_path, n_tasks=60, seed=7) -> CommunityStore:
    pool = tmp_path / "pool.csv"
    task_ids = write_task_pool(pool, n_tasks, seed=seed)
    return CommunityStore.initialize(tmp_path / "store", pool, task_ids[:10])


def onboard(store, volunteer):
    session = store.start_intro(volunteer)
    for _ in range(10):
        task = store.next_task(session.session_id)["task"]
        store.record_vote(session.session_id, task["task_id"], ACCEPT)
    return session


def drain(store, volunteer, decisions=None):
    """Complete the volunteer's open standard session; returns stop positions."""
    session = store.open_session_for(volunteer)
    stops = []
    while True:
        state = store.next_task(session.session_id)
        if state["complete"]:
            return stops
        if state["is_stop_point"]:
            stops.append(state["position"] - 1)
        decision = decisions(state) if decisions else ACCEPT
        try:
            store.record_vote(session.session_id, state["task"]["task_id"], decision)
        except TaskRetired:
            continue


# --- agreement -----------------------------------------------------------------


@pytest.mark.parametrize("accepts,rejects,expected", [(9, 0, 1.0), (3, 3, 0.0), (5, 2, 3 / 7)])
def test_compute_agreement_examples(accepts, rejects, expected):
    assert compute_agreement(accepts, rejects) == pytest.approx(expected)


def test_compute_agreement_rejects_zero_votes():
    with pytest.raises(DataError):
        compute_agreement(0, 0)


def test_compute_agreement_random_pairs_match_oracle():
    rng = random.Random(17)
    for _ in range(2000):
        total = rng.randint(1, 9)
        accepts = rng.randint(0, total)
        rejects = total - accepts
        expected = abs(accepts - rejects) / (accepts + rejects)
        got = compute_agreement(accepts, rejects)
        assert got == expected
        assert Fraction(abs(accepts - rejects), total) == Fraction(got).limit_denominator(10**6)


# --- pool loading -----------------------------------------------------------------


def test_pool_skips_sdg_17(tmp_path, caplog):
    pool = tmp_path / "pool.csv"
    pool.write_text(
        "doi,text_id,text,sdg,labels_negative,labels_positive,agreement\n"
        ",a,Keep this snippet,3,0,0,0.0\n"
        ",b,Partnership snippet,17,0,0,0.0\n",
        encoding="utf-8",
    )
    tasks = load_task_pool(pool)
    assert [t.task_id for t in tasks] == ["a"]


def test_pool_rejects_duplicate_task_ids(tmp_path):
    pool = tmp_path / "pool.csv"
    pool.write_text(
        "doi,text_id,text,sdg,labels_negative,labels_positive,agreement\n"
        ",a,Text one,3,0,0,0.0\n"
        ",a,Text two,4,0,0,0.0\n",
        encoding="utf-8",
    )
    with pytest.raises(DataError):
        load_task_pool(pool)


# --- intro flow --------------------------------------------------------------------


def test_intro_session_has_ten_fixed_tasks(tmp_path):
    store = make_store(tmp_path)
    a = store.start_intro("vol-a")
    b = store.start_intro("vol-b")
    assert len(a.task_ids) == 10
    assert a.task_ids == b.task_ids == store.intro_task_ids


def test_intro_resumes_idempotently(tmp_path):
    store = make_store(tmp_path)
    first = store.start_intro("vol-a")
    task = store.next_task(first.session_id)["task"]
    store.record_vote(first.session_id, task["task_id"], ACCEPT)
    resumed = store.start_intro("vol-a")
    assert resumed.session_id == first.session_id
    assert resumed.cursor == 1


def test_intro_complete_blocks_restart_and_unlocks_stats(tmp_path):
    store = make_store(tmp_path)
    with pytest.raises(IntroIncomplete):
        store.intro_stats("vol-a")
    onboard(store, "vol-a")
    with pytest.raises(AlreadyOnboarded):
        store.start_intro("vol-a")
    stats = store.intro_stats("vol-a")
    assert len(stats) == 10
    assert all(s["my_decision"] == ACCEPT for s in stats)
    # only this volunteer voted so far: fraction is over them alone
    assert all(s["community_accept_fraction"] == 1.0 for s in stats)


def test_intro_stats_aggregate_fraction(tmp_path):
    store = make_store(tmp_path)
    for i in range(5):
        volunteer = f"vol-{i}"
        session = store.start_intro(volunteer)
        for _ in range(10):
            task = store.next_task(session.session_id)["task"]
            decision = ACCEPT if i < 4 else REJECT
            store.record_vote(session.session_id, task["task_id"], decision)
    stats = store.intro_stats("vol-0")
    assert all(s["community_accept_fraction"] == pytest.approx(0.8) for s in stats)


def test_intro_votes_do_not_touch_public_tallies(tmp_path):
    store = make_store(tmp_path)
    onboard(store, "vol-a")
    assert all(t.total_votes == 0 for t in store.tasks.values())


# --- sessions ------------------------------------------------------------------------


def test_session_requires_onboarding(tmp_path):
    store = make_store(tmp_path)
    with pytest.raises(NotOnboarded):
        store.start_session("vol-a")


def test_session_of_100_from_large_pool(tmp_path):
    store = make_store(tmp_path, n_tasks=260)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=5)
    assert len(session.task_ids) == 100
    assert len(set(session.task_ids)) == 100


def test_session_limited_by_pool(tmp_path):
    store = make_store(tmp_path, n_tasks=47)  # 10 go to the intro
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=5)
    assert len(session.task_ids) == 37


def test_single_sdg_mode_filters_candidates(tmp_path):
    store = make_store(tmp_path, n_tasks=300)
    onboard(store, "vol-a")
    wanted = store.tasks[store.start_session("vol-a", seed=1).task_ids[0]].candidate_sdg
    # close that session by completing it is slow; use a second volunteer instead
    onboard(store, "vol-b")
    session = store.start_session("vol-b", mode=wanted, seed=2)
    assert session.mode == f"sdg:{wanted}"
    assert all(store.tasks[t].candidate_sdg == wanted for t in session.task_ids)


def test_open_session_blocks_second(tmp_path):
    store = make_store(tmp_path, n_tasks=60)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=5)
    with pytest.raises(OpenSessionExists) as exc:
        store.start_session("vol-a", seed=6)
    assert exc.value.session_id == session.session_id


def test_no_eligible_tasks(tmp_path):
    store = make_store(tmp_path, n_tasks=12)  # 10 intro + 2 public
    onboard(store, "vol-a")
    store.start_session("vol-a", seed=1)
    drain(store, "vol-a")
    with pytest.raises(NoEligibleTasks):
        store.start_session("vol-a", seed=2)


def test_sessions_never_serve_previously_voted_tasks(tmp_path):
    store = make_store(tmp_path, n_tasks=160)  # 150 public: 100 + 50 across two sessions
    onboard(store, "vol-a")
    first = store.start_session("vol-a", seed=1)
    voted = set(first.task_ids)
    drain(store, "vol-a")
    second = store.start_session("vol-a", seed=2)
    assert second.task_ids and not (set(second.task_ids) & voted)


def test_stop_points_at_multiples_of_twenty(tmp_path):
    store = make_store(tmp_path, n_tasks=300)
    onboard(store, "vol-a")
    store.start_session("vol-a", seed=3)
    stops = drain(store, "vol-a")
    assert stops == [20, 40, 60, 80]


def test_no_stop_point_at_session_end(tmp_path):
    store = make_store(tmp_path, n_tasks=50)  # exactly 40 public tasks
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=3)
    assert len(session.task_ids) == 40
    stops = drain(store, "vol-a")
    assert stops == [20]  # 40 is the end, not a break


def test_next_task_shape_and_completion(tmp_path):
    store = make_store(tmp_path, n_tasks=13)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=1)
    state = store.next_task(session.session_id)
    assert state["position"] == 1 and not state["is_stop_point"]
    drain(store, "vol-a")
    assert store.next_task(session.session_id)["complete"] is True


# --- voting -------------------------------------------------------------------------


def test_vote_updates_tallies(tmp_path):
    store = make_store(tmp_path, n_tasks=20)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=1)
    task_id = store.next_task(session.session_id)["task"]["task_id"]
    result = store.record_vote(session.session_id, task_id, ACCEPT)
    assert result["accepts"] == 1 and result["rejects"] == 0
    assert store.tasks[task_id].accepts == 1


def test_out_of_order_vote_rejected(tmp_path):
    store = make_store(tmp_path, n_tasks=20)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=1)
    wrong = session.task_ids[3]
    with pytest.raises(OutOfOrderVote):
        store.record_vote(session.session_id, wrong, ACCEPT)


def test_duplicate_vote_blocked_within_intro(tmp_path):
    store = make_store(tmp_path)
    session = store.start_intro("vol-a")
    task = store.next_task(session.session_id)["task"]
    store.record_vote(session.session_id, task["task_id"], ACCEPT)
    with pytest.raises(OutOfOrderVote):
        store.record_vote(session.session_id, task["task_id"], ACCEPT)


def test_vote_cap_and_substitution(tmp_path):
    store = make_store(tmp_path, n_tasks=150)  # 140 public; sessions of 100 leave spares
    for i in range(10):
        onboard(store, f"vol-{i}")
    # all ten sessions are created first (same seed: same first task), then
    # nine volunteers fill that task to the cap
    sessions = {i: store.start_session(f"vol-{i}", seed=100) for i in range(10)}
    target = store.next_task(sessions[0].session_id)["task"]["task_id"]
    for i in range(9):
        task_id = store.next_task(sessions[i].session_id)["task"]["task_id"]
        assert task_id == target
        store.record_vote(sessions[i].session_id, task_id, ACCEPT if i % 2 else REJECT)
    assert store.tasks[target].total_votes == 9
    # the tenth volunteer still has the now-retired task at the cursor
    session = sessions[9]
    assert store.next_task(session.session_id)["task"]["task_id"] == target
    with pytest.raises(TaskRetired) as exc:
        store.record_vote(session.session_id, target, ACCEPT)
    substitute = exc.value.substitute_task_id
    assert substitute is not None and substitute != target
    assert store.next_task(session.session_id)["task"]["task_id"] == substitute
    assert store.tasks[target].total_votes == 9  # unchanged
    # retired task never appears in new sessions
    onboard(store, "fresh")
    assert target not in store.start_session("fresh", seed=4).task_ids


# --- persistence ---------------------------------------------------------------------


def test_replay_reconstructs_state(tmp_path):
    store = make_store(tmp_path, n_tasks=60)
    onboard(store, "vol-a")
    store.start_session("vol-a", seed=1)
    session = store.open_session_for("vol-a")
    for _ in range(7):
        task = store.next_task(session.session_id)["task"]
        store.record_vote(session.session_id, task["task_id"], REJECT)
    tallies = {t.task_id: (t.accepts, t.rejects) for t in store.tasks.values()}
    store.close()

    reopened = CommunityStore(store.dir)
    assert {t.task_id: (t.accepts, t.rejects) for t in reopened.tasks.values()} == tallies
    resumed = reopened.open_session_for("vol-a")
    assert resumed.session_id == session.session_id
    assert resumed.cursor == 7
    assert reopened.volunteers["vol-a"].onboarded
    reopened.close()


def test_vote_log_is_json_lines(tmp_path):
    store = make_store(tmp_path, n_tasks=20)
    onboard(store, "vol-a")
    session = store.start_session("vol-a", seed=1)
    task = store.next_task(session.session_id)["task"]
    store.record_vote(session.session_id, task["task_id"], ACCEPT)
    lines = (store.dir / CommunityStore.VOTES_FILE).read_text().strip().splitlines()
    record = json.loads(lines[-1])
    assert record["task_id"] == task["task_id"]
    assert record["decision"] == ACCEPT
    assert set(record) == {"volunteer_id", "task_id", "decision", "timestamp", "session_id"}


# --- export ---------------------------------------------------------------------------


def test_export_threshold_and_round_trip(tmp_path):
    store = make_store(tmp_path, n_tasks=40)
    for i in range(4):
        onboard(store, f"vol-{i}")
    # same session order for everyone; volunteer i votes on the first 3-i tasks... keep simple:
    # three volunteers vote the same first two tasks; one more votes only the first
    for i, depth in enumerate([3, 3, 3, 1]):
        session = store.start_session(f"vol-{i}", seed=55)
        for _ in range(depth):
            task = store.next_task(session.session_id)["task"]
            store.record_vote(session.session_id, task["task_id"], ACCEPT if i else REJECT)
    exported = store.export_dataset(min_validators=3)
    by_votes = [t for t in store.tasks.values() if t.total_votes >= 3]
    assert sorted(s.text_id for s in exported.snippets) == sorted(t.task_id for t in by_votes)
    assert [s.text_id for s in exported.snippets] == sorted(s.text_id for s in exported.snippets)
    out = tmp_path / "export.csv"
    export_dataset_csv(store, out, min_validators=3)
    reloaded = load_community_dataset(out, strict=True)  # zero invariant violations
    for snippet in reloaded.snippets:
        task = store.tasks[snippet.text_id]
        assert snippet.labels_positive == task.accepts
        assert snippet.labels_negative == task.rejects
        assert snippet.agreement == compute_agreement(task.accepts, task.rejects)


def test_export_empty_store_is_header_only(tmp_path):
    store = make_store(tmp_path, n_tasks=15)
    out = tmp_path / "export.csv"
    export_dataset_csv(store, out)
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("doi,text_id")


# --- concurrency ------------------------------------------------------------------------


def test_concurrent_voting_respects_cap(tmp_path):
    store = make_store(tmp_path, n_tasks=80, seed=3)
    volunteers = [f"vol-{i}" for i in range(12)]
    for v in volunteers:
        onboard(store, v)

    errors = []

    def run(volunteer):
        try:
            store.start_session(volunteer, seed=900)  # same order: heavy contention
            drain(store, volunteer)
        except (NoEligibleTasks, Exception) as err:  # noqa: BLE001 - collect everything
            if not isinstance(err, NoEligibleTasks):
                errors.append(err)

    threads = [threading.Thread(target=run, args=(v,)) for v in volunteers]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert all(t.total_votes <= 9 for t in store.tasks.values())
    votes = [json.loads(line) for line in (store.dir / CommunityStore.VOTES_FILE).read_text().splitlines()]
    pairs = [(v["volunteer_id"], v["task_id"]) for v in votes]
    assert len(pairs) == len(set(pairs))
