"""Operator command line: train, evaluate, classify, export, serve.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 runtime
failure. stdout carries data; logs go to stderr.
"""

import json
import logging
import sys
from pathlib import Path

import click

from osdg import __version__
from osdg.corpus import filter_high_agreement, load_community_dataset, split, write_corpus
from osdg.errors import (
    ConfigError,
    DataError,
    Divergence,
    NoExtractor,
    OsdgError,
    UnsupportedLanguage,
)
from osdg.models import (
    TrainConfig,
    evaluate_model_set,
    load_model_set,
    save_model_set,
    train_model_set,
)
from osdg.ontology import load_ontology
from osdg.pipeline import AggregationConfig, Classifier
from osdg.translate import DictionaryBackend

DEFAULT_SEED = 42


def _metrics_json(metrics) -> str:
    return json.dumps([m.to_dict() for m in metrics], sort_keys=True)


def _prepare_dataset(dataset, min_agreement, positive_majority, test_fraction, seed):
    corpus = load_community_dataset(dataset, strict=True)
    filtered = filter_high_agreement(corpus, min_agreement, positive_majority)
    if len(filtered) == 0:
        raise DataError("no rows left after agreement filtering")
    return split(filtered, test_fraction, seed)


def _classifier_from_paths(model_path, ontology_path, min_hits=1) -> Classifier:
    model_set = load_model_set(model_path)
    ontology = load_ontology(ontology_path)
    return Classifier(
        model_set, ontology, translator=DictionaryBackend.bundled(), min_keyword_hits=min_hits
    )


@click.group()
@click.version_option(__version__, prog_name="osdg")
def cli():
    """SDG text classification toolkit."""


@cli.command()
@click.option("--dataset", required=True, type=click.Path(), help="community dataset CSV")
@click.option("--out", "out_path", required=True, type=click.Path(), help="model file to write")
@click.option("--min-agreement", default=0.6, show_default=True, type=float)
@click.option("--positive-majority/--no-positive-majority", default=True, show_default=True)
@click.option("--test-fraction", default=0.2, show_default=True, type=float)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--min-df", default=5, show_default=True, type=int)
@click.option("--max-features", default=50_000, show_default=True, type=int)
@click.option("--reg-lambda", "lam", default=1e-4, show_default=True, type=float)
@click.option("--lr", default=0.1, show_default=True, type=float)
@click.option("--epochs", default=500, show_default=True, type=int)
@click.option("--patience", default=10, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int)
def train(
    dataset,
    out_path,
    min_agreement,
    positive_majority,
    test_fraction,
    seed,
    min_df,
    max_features,
    lam,
    lr,
    epochs,
    patience,
    jobs,
):
    """Train the 16 one-vs-rest models and report held-out metrics."""
    if not Path(dataset).exists():
        raise click.UsageError(f"dataset not found: {dataset}")
    train_corpus, test_corpus = _prepare_dataset(
        dataset, min_agreement, positive_majority, test_fraction, seed
    )
    config = TrainConfig(
        lam=lam, lr=lr, epochs=epochs, seed=seed, patience=patience
    )
    model_set = train_model_set(
        train_corpus, config, min_df=min_df, max_features=max_features, jobs=jobs
    )
    save_model_set(model_set, out_path)
    metrics = evaluate_model_set(model_set, test_corpus)
    metrics_path = Path(out_path).with_name(Path(out_path).name + ".metrics.json")
    metrics_path.write_text(_metrics_json(metrics), encoding="utf-8")
    click.echo(f"{'sdg':>3}  {'precision':>9}  {'recall':>9}  {'f1':>9}  {'auc':>9}  {'support':>7}")
    for m in metrics:
        click.echo(
            f"{m.sdg:>3}  {m.precision:>9.4f}  {m.recall:>9.4f}  {m.f1:>9.4f}"
            f"  {m.auc:>9.4f}  {m.support:>7}"
        )
    click.echo(f"model written to {out_path}", err=True)
    click.echo(f"metrics written to {metrics_path}", err=True)


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--dataset", required=True, type=click.Path())
@click.option("--split", "split_name", default="test", show_default=True,
              type=click.Choice(["train", "test"]))
@click.option("--min-agreement", default=0.6, show_default=True, type=float)
@click.option("--positive-majority/--no-positive-majority", default=True, show_default=True)
@click.option("--test-fraction", default=0.2, show_default=True, type=float)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
def eval(model_path, dataset, split_name, min_agreement, positive_majority, test_fraction, seed):
    """Evaluate a model file on a deterministic dataset split."""
    if not Path(dataset).exists():
        raise click.UsageError(f"dataset not found: {dataset}")
    if not Path(model_path).exists():
        raise click.UsageError(f"model not found: {model_path}")
    train_corpus, test_corpus = _prepare_dataset(
        dataset, min_agreement, positive_majority, test_fraction, seed
    )
    corpus = test_corpus if split_name == "test" else train_corpus
    if len(corpus) == 0:
        raise DataError(f"{split_name} split is empty")
    model_set = load_model_set(model_path)
    click.echo(_metrics_json(evaluate_model_set(model_set, corpus)))


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", required=True, type=click.Path())
@click.option("--language", default="en", show_default=True)
@click.option("--stdin", "from_stdin", is_flag=True, help="read the text from stdin")
@click.argument("text", required=False)
def classify(model_path, ontology_path, language, from_stdin, text):
    """Classify one text; prints the result as JSON."""
    if from_stdin:
        text = sys.stdin.read()
    if not text or not text.strip():
        raise click.UsageError("no input text (pass TEXT or --stdin)")
    for p in (model_path, ontology_path):
        if not Path(p).exists():
            raise click.UsageError(f"file not found: {p}")
    try:
        classifier = _classifier_from_paths(model_path, ontology_path)
        result = classifier.classify_text(text, language)
    except UnsupportedLanguage as err:
        raise click.UsageError(str(err)) from None
    click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))


@cli.command("classify-doc")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", required=True, type=click.Path())
@click.option("--file", "file_path", required=True, type=click.Path())
@click.option("--language", default="en", show_default=True)
@click.option("--pdf-extractor", default=None, help="external command for PDF text extraction")
@click.option("--relevance-threshold", default=0.15, show_default=True, type=float)
@click.option("--sdg-share-threshold", default=0.10, show_default=True, type=float)
def classify_doc(
    model_path,
    ontology_path,
    file_path,
    language,
    pdf_extractor,
    relevance_threshold,
    sdg_share_threshold,
):
    """Classify a longer document (.txt or .pdf) and print the distribution."""
    path = Path(file_path)
    if not path.exists():
        raise click.UsageError(f"file not found: {file_path}")
    for p in (model_path, ontology_path):
        if not Path(p).exists():
            raise click.UsageError(f"file not found: {p}")
    if path.suffix.lower() == ".pdf":
        from osdg.service import extract_pdf_text

        if not pdf_extractor:
            raise NoExtractor("PDF input needs --pdf-extractor")
        text = extract_pdf_text(path.read_bytes(), pdf_extractor)
    else:
        text = path.read_text(encoding="utf-8")
    try:
        classifier = _classifier_from_paths(model_path, ontology_path)
        result = classifier.classify_document(
            text,
            language,
            AggregationConfig(
                relevance_threshold=relevance_threshold,
                sdg_share_threshold=sdg_share_threshold,
            ),
        )
    except UnsupportedLanguage as err:
        raise click.UsageError(str(err)) from None
    click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))


@cli.command("export-dataset")
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--min-validators", default=3, show_default=True, type=int)
def export_dataset_cmd(store_dir, out_path, min_validators):
    """Export validated tasks as a community-dataset CSV."""
    from osdg.community import CommunityStore

    if not Path(store_dir).exists():
        raise click.UsageError(f"store not found: {store_dir}")
    store = CommunityStore(store_dir)
    try:
        corpus = store.export_dataset(min_validators)
        write_corpus(corpus, out_path)
    finally:
        store.close()
    click.echo(f"exported {len(corpus)} rows to {out_path}", err=True)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
def serve(config_path):
    """Run the HTTP service (validates config before binding)."""
    from osdg import service

    config = service.load_config(config_path)
    service.run(config)


@cli.group()
def ontology():
    """Ontology file utilities."""


@ontology.command("validate")
@click.argument("path", type=click.Path())
def ontology_validate(path):
    """Load an ontology CSV; non-zero exit on any error."""
    if not Path(path).exists():
        raise click.UsageError(f"file not found: {path}")
    loaded = load_ontology(path)
    click.echo(f"{len(loaded.terms)} terms across {len(loaded.sdgs())} SDGs (ok)")


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as err:
        return int(err.exit_code)
    except click.UsageError as err:
        click.echo(f"error: {err.format_message()}", err=True)
        return 1
    except click.Abort:
        return 1
    except (ConfigError, UnsupportedLanguage) as err:
        click.echo(f"error: {err}", err=True)
        return 1
    except FileNotFoundError as err:
        click.echo(f"error: file not found: {err}", err=True)
        return 1
    except Divergence as err:
        click.echo(f"error: {err}", err=True)
        return 3
    except (DataError, NoExtractor) as err:
        click.echo(f"error: {err}", err=True)
        return 2
    except OsdgError as err:
        click.echo(f"error: {err}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
