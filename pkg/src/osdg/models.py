"""TF-IDF features and the sixteen per-SDG one-vs-rest logistic classifiers.

Each SDG gets an independent binary logistic regression over a shared
vocabulary: sub-linear TF (1 + ln tf) times smoothed IDF, L2-normalized.
Training is mini-batch gradient descent with a proximal (shrinkage) step
for the L2 penalty, class-balancing example weights, and early stopping
on a held-out validation slice.
"""

import json
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.special import expit

from osdg.corpus import Corpus
from osdg.errors import Corrupt, DataError, Divergence, NoPositives, UnsupportedVersion
from osdg.ontology import tokenize
from osdg.sdg import TRAINABLE_SDGS

logger = logging.getLogger(__name__)

FORMAT_VERSION = "osdg-model/1"


@dataclass
class Vocabulary:
    tokens: list[str]  # feature index -> token
    idf: np.ndarray  # aligned with tokens
    min_df: int
    max_features: int
    index: dict[str, int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.index is None:
            self.index = {tok: i for i, tok in enumerate(self.tokens)}
        self.idf = np.asarray(self.idf, dtype=np.float64)

    @property
    def size(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class FeatureVector:
    indices: np.ndarray  # strictly increasing feature indices
    weights: np.ndarray  # L2 norm is 0 (empty) or 1

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights**2)))


def _doc_tokens(text: str) -> list[str]:
    return [t.text for t in tokenize(text)]


def build_vocabulary(corpus: Corpus, min_df: int = 5, max_features: int = 50_000) -> Vocabulary:
    """Document-frequency vocabulary with smoothed IDF = ln((1+N)/(1+df)) + 1."""
    if len(corpus) == 0:
        raise DataError("cannot build a vocabulary from an empty corpus")
    return _vocabulary_from_token_lists(
        [_doc_tokens(s.text) for s in corpus.snippets], min_df, max_features
    )


def _vocabulary_from_token_lists(
    token_lists: list[list[str]], min_df: int, max_features: int
) -> Vocabulary:
    df: Counter = Counter()
    for toks in token_lists:
        df.update(set(toks))
    eligible = [(tok, n) for tok, n in df.items() if n >= min_df]
    # highest document frequency first; lexicographic tie-break
    eligible.sort(key=lambda item: (-item[1], item[0]))
    selected = sorted(tok for tok, _ in eligible[:max_features])
    n_docs = len(token_lists)
    idf = np.array(
        [math.log((1 + n_docs) / (1 + df[tok])) + 1.0 for tok in selected], dtype=np.float64
    )
    return Vocabulary(tokens=selected, idf=idf, min_df=min_df, max_features=max_features)


def _tf_weights(tokens: list[str], vocabulary: Vocabulary) -> tuple[list[int], list[float]]:
    counts: Counter = Counter()
    for tok in tokens:
        idx = vocabulary.index.get(tok)
        if idx is not None:
            counts[idx] += 1
    indices = sorted(counts)
    weights = [(1.0 + math.log(counts[i])) * vocabulary.idf[i] for i in indices]
    return indices, weights


def featurize(text: str, vocabulary: Vocabulary) -> FeatureVector:
    """Sparse L2-normalized TF-IDF vector; out-of-vocabulary tokens are ignored."""
    indices, weights = _tf_weights(_doc_tokens(text), vocabulary)
    w = np.asarray(weights, dtype=np.float64)
    norm = np.sqrt(np.sum(w**2))
    if norm > 0:
        w = w / norm
    return FeatureVector(indices=np.asarray(indices, dtype=np.int64), weights=w)


def featurize_matrix(texts: list[str], vocabulary: Vocabulary) -> sparse.csr_matrix:
    """Row-per-text CSR matrix of L2-normalized TF-IDF weights."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for text in texts:
        idx, w = _tf_weights(_doc_tokens(text), vocabulary)
        norm = math.sqrt(sum(x * x for x in w))
        if norm > 0:
            w = [x / norm for x in w]
        indices.extend(idx)
        data.extend(w)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(texts), vocabulary.size),
    )


@dataclass
class TrainConfig:
    lam: float = 1e-4  # L2 strength
    lr: float = 0.1  # base step; decays as lr / sqrt(epoch)
    epochs: int = 500
    seed: int = 42
    patience: int = 10
    batch_size: int = 256
    val_fraction: float = 0.1
    early_stop_tol: float = 1e-4  # validation gains below this count as "no improvement"
    threshold: float = 0.5


@dataclass
class OvrModel:
    sdg: int
    weights: np.ndarray
    bias: float
    threshold: float
    training_meta: dict


@dataclass
class OvrModelSet:
    vocabulary: Vocabulary
    models: dict[int, OvrModel]
    format_version: str = FORMAT_VERSION

    def __post_init__(self):
        if sorted(self.models) != list(TRAINABLE_SDGS):
            raise DataError(f"model set must cover SDGs 1..16, got {sorted(self.models)}")
        for m in self.models.values():
            if len(m.weights) != self.vocabulary.size:
                raise DataError(
                    f"SDG {m.sdg}: weight length {len(m.weights)} != vocabulary {self.vocabulary.size}"
                )


def loss_and_grad(
    w: np.ndarray,
    b: float,
    X: sparse.csr_matrix,
    y: np.ndarray,
    sample_weight: np.ndarray,
    lam: float,
) -> tuple[float, np.ndarray, float]:
    """Weighted-mean log-loss + (lam/2)·||w||², with analytic gradients.

    Returns (loss, dL/dw, dL/db). The bias is not regularized.
    """
    z = X @ w + b
    # log(1 + e^z) - y*z, computed stably
    losses = np.logaddexp(0.0, z) - y * z
    wsum = sample_weight.sum()
    loss = float(np.dot(sample_weight, losses) / wsum + 0.5 * lam * np.dot(w, w))
    residual = (expit(z) - y) * sample_weight / wsum
    grad_w = X.T @ residual + lam * w
    grad_b = float(residual.sum())
    return loss, grad_w, grad_b


def _stratified_holdout(
    y: np.ndarray, fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """(fit_idx, val_idx); falls back to held-in validation for tiny classes."""
    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y == 0)
    n_val_pos = int(len(pos) * fraction)
    n_val_neg = int(len(neg) * fraction)
    if n_val_pos < 1 or n_val_neg < 1:
        everything = np.arange(len(y))
        return everything, everything
    pos = rng.permutation(pos)
    neg = rng.permutation(neg)
    val = np.concatenate([pos[:n_val_pos], neg[:n_val_neg]])
    fit = np.concatenate([pos[n_val_pos:], neg[n_val_neg:]])
    return np.sort(fit), np.sort(val)


def _fit_logistic(
    X: sparse.csr_matrix, y: np.ndarray, config: TrainConfig, rng: np.random.Generator
) -> tuple[np.ndarray, float, dict]:
    n, n_features = X.shape
    n_pos = int(y.sum())
    n_neg = n - n_pos
    # inverse-frequency weights: both classes contribute half the total mass
    w_pos = n / (2.0 * n_pos)
    w_neg = n / (2.0 * n_neg)
    sample_weight = np.where(y == 1, w_pos, w_neg)

    fit_idx, val_idx = _stratified_holdout(y, config.val_fraction, rng)
    X_fit, y_fit, sw_fit = X[fit_idx], y[fit_idx], sample_weight[fit_idx]
    X_val, y_val, sw_val = X[val_idx], y[val_idx], sample_weight[val_idx]

    w = np.zeros(n_features)
    b = 0.0
    best = (np.inf, w.copy(), b, 0)
    bad_epochs = 0
    loss_curve: list[float] = []
    n_fit = len(fit_idx)
    for epoch in range(1, config.epochs + 1):
        lr_t = config.lr / math.sqrt(epoch)
        order = rng.permutation(n_fit)
        X_epoch, y_epoch, sw_epoch = X_fit[order], y_fit[order], sw_fit[order]
        for start in range(0, n_fit, config.batch_size):
            stop = start + config.batch_size
            Xb, yb, swb = X_epoch[start:stop], y_epoch[start:stop], sw_epoch[start:stop]
            z = Xb @ w + b
            residual = (expit(z) - yb) * swb / swb.sum()
            w -= lr_t * (Xb.T @ residual)
            b -= lr_t * float(residual.sum())
            # proximal step for the L2 term (stable for any lam)
            w /= 1.0 + lr_t * config.lam
        train_loss, _, _ = loss_and_grad(w, b, X_fit, y_fit, sw_fit, config.lam)
        if not math.isfinite(train_loss):
            raise Divergence(epoch)
        loss_curve.append(train_loss)
        val_loss, _, _ = loss_and_grad(w, b, X_val, y_val, sw_val, config.lam)
        if val_loss < best[0] - config.early_stop_tol:
            best = (val_loss, w.copy(), b, epoch)
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                break
    _, w, b, best_epoch = best
    meta = {
        "seed": config.seed,
        "epochs_run": len(loss_curve),
        "best_epoch": best_epoch,
        "lambda": config.lam,
        "lr": config.lr,
        "batch_size": config.batch_size,
        "patience": config.patience,
        "early_stop_tol": config.early_stop_tol,
        "val_fraction": config.val_fraction,
        "class_weights": {"positive": w_pos, "negative": w_neg},
        "loss_curve": loss_curve,
    }
    return w, b, meta


def _labels_for_sdg(corpus: Corpus, sdg: int) -> tuple[np.ndarray, np.ndarray]:
    """(row_mask, y): ties on the candidate SDG carry no signal and are dropped."""
    mask = np.ones(len(corpus), dtype=bool)
    y = np.zeros(len(corpus), dtype=np.float64)
    for i, s in enumerate(corpus.snippets):
        if s.sdg == sdg:
            if s.labels_positive > s.labels_negative:
                y[i] = 1.0
            elif s.labels_positive == s.labels_negative:
                mask[i] = False
    return mask, y


def train_ovr(
    train: Corpus, sdg: int, vocabulary: Vocabulary, config: TrainConfig | None = None
) -> OvrModel:
    """Train the binary one-vs-rest model for one SDG."""
    config = config or TrainConfig()
    X = featurize_matrix(train.texts(), vocabulary)
    return _train_one(X, train, sdg, vocabulary, config)


def _train_one(
    X: sparse.csr_matrix, train: Corpus, sdg: int, vocabulary: Vocabulary, config: TrainConfig
) -> OvrModel:
    mask, y = _labels_for_sdg(train, sdg)
    X_used, y_used = X[mask], y[mask]
    n_pos = int(y_used.sum())
    if n_pos < 1:
        raise NoPositives(f"no positive training rows for SDG {sdg}")
    if n_pos == len(y_used):
        raise DataError(f"no negative training rows for SDG {sdg}")
    rng = np.random.default_rng([config.seed, sdg])
    w, b, meta = _fit_logistic(X_used, y_used, config, rng)
    meta["n_positive"] = n_pos
    meta["n_negative"] = int(len(y_used) - n_pos)
    return OvrModel(sdg=sdg, weights=w, bias=b, threshold=config.threshold, training_meta=meta)


def train_model_set(
    corpus: Corpus,
    config: TrainConfig | None = None,
    min_df: int = 5,
    max_features: int = 50_000,
    jobs: int = 1,
) -> OvrModelSet:
    """Train all sixteen models over one shared vocabulary.

    Per-SDG training is independent (separate RNG streams), so results do
    not depend on ``jobs``.
    """
    config = config or TrainConfig()
    vocabulary = build_vocabulary(corpus, min_df=min_df, max_features=max_features)
    X = featurize_matrix(corpus.texts(), vocabulary)
    models: dict[int, OvrModel] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {
                sdg: pool.submit(_train_one, X, corpus, sdg, vocabulary, config)
                for sdg in TRAINABLE_SDGS
            }
            models = {sdg: fut.result() for sdg, fut in futures.items()}
    else:
        for sdg in TRAINABLE_SDGS:
            models[sdg] = _train_one(X, corpus, sdg, vocabulary, config)
            logger.info(
                "trained SDG %d (%d epochs, best %d)",
                sdg,
                models[sdg].training_meta["epochs_run"],
                models[sdg].training_meta["best_epoch"],
            )
    return OvrModelSet(vocabulary=vocabulary, models=models)


def predict_proba(model_set: OvrModelSet, text: str) -> dict[int, float]:
    """Per-SDG probability sigma(w.x + b); one-vs-rest, so no sum-to-1."""
    vec = featurize(text, model_set.vocabulary)
    probs: dict[int, float] = {}
    for sdg, model in sorted(model_set.models.items()):
        z = float(model.weights[vec.indices] @ vec.weights) + model.bias
        probs[sdg] = float(expit(z))
    return probs


def predict_proba_matrix(model_set: OvrModelSet, texts: list[str]) -> np.ndarray:
    """(n_texts, 16) probability matrix, columns ordered SDG 1..16."""
    X = featurize_matrix(texts, model_set.vocabulary)
    W = np.stack([model_set.models[s].weights for s in TRAINABLE_SDGS])
    b = np.array([model_set.models[s].bias for s in TRAINABLE_SDGS])
    return expit(X @ W.T + b)


def ml_labels(probs: dict[int, float], model_set: OvrModelSet) -> set[int]:
    """SDGs whose probability meets the per-model threshold (inclusive)."""
    return {
        sdg
        for sdg, p in probs.items()
        if sdg in model_set.models and p >= model_set.models[sdg].threshold
    }


def save_model_set(model_set: OvrModelSet, path: str | Path) -> None:
    doc = {
        "format_version": model_set.format_version,
        "vocabulary": {
            "tokens": model_set.vocabulary.tokens,
            "idf": model_set.vocabulary.idf.tolist(),
            "min_df": model_set.vocabulary.min_df,
            "max_features": model_set.vocabulary.max_features,
        },
        "models": {
            str(sdg): {
                "weights": m.weights.tolist(),
                "bias": m.bias,
                "threshold": m.threshold,
                "training_meta": m.training_meta,
            }
            for sdg, m in sorted(model_set.models.items())
        },
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def load_model_set(path: str | Path) -> OvrModelSet:
    raw = Path(path).read_text(encoding="utf-8")
    if not raw.strip():
        raise Corrupt(f"{path}: empty model file")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise Corrupt(f"{path}: not valid JSON ({err})") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise Corrupt(f"{path}: missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"{path}: format_version {doc['format_version']!r}, expected {FORMAT_VERSION!r}"
        )
    try:
        vocab = Vocabulary(
            tokens=list(doc["vocabulary"]["tokens"]),
            idf=np.asarray(doc["vocabulary"]["idf"], dtype=np.float64),
            min_df=int(doc["vocabulary"]["min_df"]),
            max_features=int(doc["vocabulary"]["max_features"]),
        )
        models = {
            int(sdg): OvrModel(
                sdg=int(sdg),
                weights=np.asarray(spec["weights"], dtype=np.float64),
                bias=float(spec["bias"]),
                threshold=float(spec["threshold"]),
                training_meta=spec.get("training_meta", {}),
            )
            for sdg, spec in doc["models"].items()
        }
    except (KeyError, TypeError, ValueError) as err:
        raise Corrupt(f"{path}: malformed model document ({err})") from None
    return OvrModelSet(vocabulary=vocab, models=models, format_version=doc["format_version"])


@dataclass(frozen=True)
class SdgMetrics:
    sdg: int
    precision: float
    recall: float
    f1: float
    auc: float
    support: int

    def to_dict(self) -> dict:
        return {
            "sdg": self.sdg,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
            "support": self.support,
        }


def evaluate_model_set(model_set: OvrModelSet, corpus: Corpus) -> list[SdgMetrics]:
    """Held-out precision/recall/F1/AUC per SDG at each model's threshold."""
    from sklearn.metrics import precision_recall_fscore_support, roc_auc_score

    if len(corpus) == 0:
        raise DataError("cannot evaluate on an empty corpus")
    probs = predict_proba_matrix(model_set, corpus.texts())
    candidates = np.array([s.sdg for s in corpus.snippets])
    out: list[SdgMetrics] = []
    for col, sdg in enumerate(TRAINABLE_SDGS):
        y_true = (candidates == sdg).astype(int)
        if y_true.sum() == 0 or y_true.sum() == len(y_true):
            raise DataError(f"evaluation split has a single class for SDG {sdg}")
        y_pred = (probs[:, col] >= model_set.models[sdg].threshold).astype(int)
        precision, recall, f1, _ = precision_recall_fscore_support(
            y_true, y_pred, average="binary", zero_division=0
        )
        auc = roc_auc_score(y_true, probs[:, col])
        out.append(
            SdgMetrics(
                sdg=sdg,
                precision=float(precision),
                recall=float(recall),
                f1=float(f1),
                auc=float(auc),
                support=int(y_true.sum()),
            )
        )
    return out


def retrain_single(
    model_set: OvrModelSet, corpus: Corpus, sdg: int, config: TrainConfig | None = None
) -> OvrModelSet:
    """New model set with one SDG retrained; the other fifteen are untouched."""
    config = config or TrainConfig()
    X = featurize_matrix(corpus.texts(), model_set.vocabulary)
    new_model = _train_one(X, corpus, sdg, model_set.vocabulary, config)
    models = dict(model_set.models)
    models[sdg] = new_model
    return replace(model_set, models=models)
