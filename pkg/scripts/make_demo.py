"""Builds a self-contained demo environment for the HTTP service.

Creates a synthetic dataset, trains a small model on it, seeds a community
store, and writes a service config. Then:

    osdg serve --config <dir>/config.json
"""

import argparse
import json
import shutil
import sys
from pathlib import Path

from osdg.community import CommunityStore
from osdg.corpus import filter_high_agreement, split, write_corpus
from osdg.datagen import generate_release, write_task_pool
from osdg.models import TrainConfig, save_model_set, train_model_set

ONTOLOGY_SRC = Path(__file__).resolve().parent.parent / "src" / "osdg" / "data" / "seed_ontology.csv"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo", help="output directory")
    parser.add_argument("--rows", type=int, default=1600)
    parser.add_argument("--epochs", type=int, default=25)
    parser.add_argument("--tasks", type=int, default=260)
    parser.add_argument("--listen", default="127.0.0.1:8765")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)

    print(f"generating {args.rows}-row dataset ...", file=sys.stderr)
    corpus = generate_release(n_rows=args.rows, seed=5)
    write_corpus(corpus, out / "dataset.csv")

    print("training models ...", file=sys.stderr)
    filtered = filter_high_agreement(corpus, 0.6, require_positive_majority=True)
    train_corpus, _ = split(filtered, 0.2, args.seed)
    model_set = train_model_set(
        train_corpus, TrainConfig(epochs=args.epochs, seed=args.seed), min_df=2
    )
    save_model_set(model_set, out / "model.json")

    shutil.copy(ONTOLOGY_SRC, out / "seed-v1.csv")

    storage = out / "storage"
    storage.mkdir(exist_ok=True)
    pool = out / "pool.csv"
    task_ids = write_task_pool(pool, args.tasks, seed=3)
    if not (storage / "community" / "pool.csv").exists():
        CommunityStore.initialize(storage / "community", pool, task_ids[:10]).close()

    config = {
        "listen": args.listen,
        "model_path": str(out / "model.json"),
        "ontology_path": str(out / "seed-v1.csv"),
        "storage_dir": str(storage),
        "translator": {"kind": "dictionary"},
        "cors_origins": ["*"],
    }
    (out / "config.json").write_text(json.dumps(config, indent=2), encoding="utf-8")
    print(f"demo environment ready: osdg serve --config {out / 'config.json'}")


if __name__ == "__main__":
    main()
