"""SDG text classification: model screening gated by keyword evidence,
document aggregation, a community labeling backend, HTTP API and CLI."""

__version__ = "0.1.0"

from osdg.corpus import Corpus, LabeledSnippet, filter_high_agreement, load_community_dataset, split, write_corpus
from osdg.ontology import Ontology, load_ontology, match_keywords, tokenize
from osdg.pipeline import AggregationConfig, Classifier, chunk_document
from osdg.models import (
    OvrModelSet,
    TrainConfig,
    load_model_set,
    predict_proba,
    save_model_set,
    train_model_set,
)

__all__ = [
    "__version__",
    "Corpus",
    "LabeledSnippet",
    "load_community_dataset",
    "write_corpus",
    "filter_high_agreement",
    "split",
    "Ontology",
    "load_ontology",
    "match_keywords",
    "tokenize",
    "AggregationConfig",
    "Classifier",
    "chunk_document",
    "OvrModelSet",
    "TrainConfig",
    "train_model_set",
    "save_model_set",
    "load_model_set",
    "predict_proba",
]
