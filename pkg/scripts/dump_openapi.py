"""Writes the service's OpenAPI description to frontend/openapi.json.

The labeling UI's contract test checks its endpoint list against this
snapshot; regenerate after changing service routes.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from osdg.community import CommunityStore
from osdg.datagen import write_task_pool
from osdg.models import OvrModel, OvrModelSet, Vocabulary, save_model_set
from osdg.sdg import TRAINABLE_SDGS
from osdg.service import ServiceConfig, create_app

OUT = Path(__file__).resolve().parent.parent / "frontend" / "openapi.json"


def placeholder_model_set() -> OvrModelSet:
    vocab = Vocabulary(tokens=["stub"], idf=np.ones(1), min_df=1, max_features=1)
    models = {
        sdg: OvrModel(sdg=sdg, weights=np.zeros(1), bias=0.0, threshold=0.5, training_meta={})
        for sdg in TRAINABLE_SDGS
    }
    return OvrModelSet(vocabulary=vocab, models=models)


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        save_model_set(placeholder_model_set(), tmp / "model.json")
        (tmp / "ontology.csv").write_text("sdg,term\n6,stub term\n", encoding="utf-8")
        storage = tmp / "storage"
        storage.mkdir()
        task_ids = write_task_pool(tmp / "pool.csv", 20, seed=1)
        CommunityStore.initialize(storage / "community", tmp / "pool.csv", task_ids[:10]).close()
        app = create_app(
            ServiceConfig(
                model_path=str(tmp / "model.json"),
                ontology_path=str(tmp / "ontology.csv"),
                storage_dir=str(storage),
            )
        )
        OUT.parent.mkdir(parents=True, exist_ok=True)
        OUT.write_text(json.dumps(app.openapi(), indent=1, sort_keys=True), encoding="utf-8")
        print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
