import time
from types import SimpleNamespace

import numpy as np
import pytest

from osdg.corpus import filter_high_agreement, split, write_corpus
from osdg.datagen import generate_release
from osdg.models import OvrModel, OvrModelSet, TrainConfig, Vocabulary, evaluate_model_set, train_model_set
from osdg.ontology import Ontology, load_ontology, make_term
from osdg.sdg import TRAINABLE_SDGS

SEED_ONTOLOGY = "src/osdg/data/seed_ontology.csv"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when == "call":
                name = rep.nodeid.split("::")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"  {status}: {name}")


def manual_model_set(triggers: dict[int, str]) -> OvrModelSet:
    """Hand-built model set: SDG k fires iff its trigger token is present.

    bias -4 keeps baseline probability ~0.018; weight 20 pushes any text
    containing the trigger token (L2 share >= 0.25) above the threshold.
    """
    tokens = sorted(set(triggers.values()) | {"filler"})
    vocab = Vocabulary(tokens=tokens, idf=np.ones(len(tokens)), min_df=1, max_features=100)
    models = {}
    for sdg in TRAINABLE_SDGS:
        weights = np.zeros(vocab.size)
        token = triggers.get(sdg)
        if token is not None:
            weights[vocab.index[token]] = 20.0
        models[sdg] = OvrModel(
            sdg=sdg, weights=weights, bias=-4.0, threshold=0.5, training_meta={}
        )
    return OvrModelSet(vocabulary=vocab, models=models)


def ontology_from(terms: list[tuple[int, str]], version: str = "fixture") -> Ontology:
    return Ontology(terms=[make_term(sdg, phrase) for sdg, phrase in terms], version=version)


@pytest.fixture(scope="session")
def release_corpus():
    return generate_release()


@pytest.fixture(scope="session")
def release_csv(release_corpus, tmp_path_factory):
    path = tmp_path_factory.mktemp("release") / "release.csv"
    write_corpus(release_corpus, path)
    return path


@pytest.fixture(scope="session")
def seed_ontology():
    return load_ontology(SEED_ONTOLOGY, version="seed-v1")


@pytest.fixture(scope="session")
def trained(release_corpus):
    """One full default training run shared by the whole suite (timed)."""
    filtered = filter_high_agreement(release_corpus, 0.6, require_positive_majority=True)
    train_corpus, test_corpus = split(filtered, 0.2, 42)
    started = time.monotonic()
    model_set = train_model_set(train_corpus, TrainConfig(seed=42))
    train_seconds = time.monotonic() - started
    metrics = evaluate_model_set(model_set, test_corpus)
    return SimpleNamespace(
        model_set=model_set,
        metrics=metrics,
        train_seconds=train_seconds,
        filtered_rows=len(filtered),
        train_corpus=train_corpus,
        test_corpus=test_corpus,
    )


@pytest.fixture(scope="session")
def trained_model_path(trained, tmp_path_factory):
    from osdg.models import save_model_set

    path = tmp_path_factory.mktemp("model") / "model.json"
    save_model_set(trained.model_set, path)
    return path
