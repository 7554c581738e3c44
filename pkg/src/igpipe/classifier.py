"""Regulative-vs-constitutive statement classifier.

TF-IDF over word (1-3)-grams, top-k feature selection by class
separation, and an L2-regularized logistic model fitted by full-batch
gradient descent. Everything is deterministic: same corpus, k and seed
give byte-identical serialized models.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .conllu import Statement
from .errors import TrainingError

NGRAM_RANGE = (1, 3)
DEFAULT_FEATURE_COUNT = 70

# gradient-descent hyperparameters; fixed so training is reproducible
_L2 = 1e-4
_STEP = 1.0
_MAX_ITER = 5000
_GRAD_TOL = 1e-9


class StatementType(str, Enum):
    REGULATIVE = "regulative"
    CONSTITUTIVE = "constitutive"


@dataclass(frozen=True)
class FeatureSpace:
    """Selected n-gram vocabulary with smoothed idf weights."""

    ngram_range: tuple[int, int]
    vocabulary: tuple[str, ...]
    idf: tuple[float, ...]

    def __post_init__(self):
        if len(self.vocabulary) != len(self.idf):
            raise TrainingError("vocabulary and idf length mismatch")
        if any(not math.isfinite(v) or v <= 0 for v in self.idf):
            raise TrainingError("idf values must be finite and positive")

    @property
    def k(self) -> int:
        return len(self.vocabulary)

    def index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.vocabulary)}


@dataclass(frozen=True)
class ClassifierModel:
    feature_space: FeatureSpace
    weights: tuple[float, ...]
    intercept: float
    threshold: float = 0.0
    training_seed: int = 0

    def __post_init__(self):
        if len(self.weights) != self.feature_space.k:
            raise TrainingError("weights length must equal feature count")

    def to_json(self) -> str:
        payload = {
            "ngram_range": list(self.feature_space.ngram_range),
            "k": self.feature_space.k,
            "vocabulary": list(self.feature_space.vocabulary),
            "idf": list(self.feature_space.idf),
            "weights": list(self.weights),
            "intercept": self.intercept,
            "threshold": self.threshold,
            "training_seed": self.training_seed,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClassifierModel":
        try:
            d = json.loads(text)
            space = FeatureSpace(
                ngram_range=tuple(d["ngram_range"]),
                vocabulary=tuple(d["vocabulary"]),
                idf=tuple(d["idf"]),
            )
            return cls(
                feature_space=space,
                weights=tuple(d["weights"]),
                intercept=d["intercept"],
                threshold=d["threshold"],
                training_seed=d["training_seed"],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise TrainingError(f"invalid model file: {e}") from e

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path) -> "ClassifierModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


def extract_ngrams(statement: Statement) -> list[str]:
    """All contiguous word 1-, 2- and 3-grams over lowercased forms.

    Punctuation tokens (upos PUNCT) are dropped before enumeration, so
    n-grams may bridge a removed comma. Order: n ascending, position
    ascending.
    """
    words = [t.form.lower() for t in statement.tokens if t.upos != "PUNCT"]
    lo, hi = NGRAM_RANGE
    grams = []
    for n in range(lo, hi + 1):
        for i in range(len(words) - n + 1):
            grams.append(" ".join(words[i : i + n]))
    return grams


def _vector(counts: Counter, space: FeatureSpace) -> np.ndarray:
    """tf*idf over the selected vocabulary, L2-normalized (zero stays zero)."""
    x = np.zeros(space.k)
    index = space.index()
    for gram, c in counts.items():
        j = index.get(gram)
        if j is not None:
            x[j] = c * space.idf[j]
    norm = np.linalg.norm(x)
    if norm > 0:
        x /= norm
    return x


def fit(
    corpus: list[tuple[Statement, StatementType]],
    k: int = DEFAULT_FEATURE_COUNT,
    seed: int = 0,
) -> ClassifierModel:
    """Fit the TF-IDF + linear model on labeled statements.

    Feature selection ranks n-grams by the absolute difference of
    per-class mean TF-IDF, ties broken lexicographically. Raises
    TrainingError for a single-class corpus or k beyond the vocabulary.
    """
    if not corpus:
        raise TrainingError("empty corpus")
    labels = {label for _, label in corpus}
    if len(labels) < 2:
        raise TrainingError(
            f"corpus contains a single class ({next(iter(labels)).value}); need both"
        )

    docs = [Counter(extract_ngrams(stmt)) for stmt, _ in corpus]
    n_docs = len(docs)
    df: Counter = Counter()
    for counts in docs:
        df.update(counts.keys())
    all_grams = sorted(df.keys())
    if k > len(all_grams):
        raise TrainingError(
            f"k={k} exceeds available n-gram count {len(all_grams)}"
        )

    idf_all = {g: math.log((1 + n_docs) / (1 + df[g])) + 1.0 for g in all_grams}

    # class-separation score on L2-normalized tf-idf vectors
    col = {g: j for j, g in enumerate(all_grams)}
    mat = np.zeros((n_docs, len(all_grams)))
    for i, counts in enumerate(docs):
        for g, c in counts.items():
            mat[i, col[g]] = c * idf_all[g]
        norm = np.linalg.norm(mat[i])
        if norm > 0:
            mat[i] /= norm
    is_reg = np.array(
        [label is StatementType.REGULATIVE for _, label in corpus], dtype=bool
    )
    mean_reg = mat[is_reg].mean(axis=0)
    mean_con = mat[~is_reg].mean(axis=0)
    score = np.abs(mean_reg - mean_con)

    ranked = sorted(all_grams, key=lambda g: (-score[col[g]], g))
    selected = sorted(ranked[:k])
    space = FeatureSpace(
        ngram_range=NGRAM_RANGE,
        vocabulary=tuple(selected),
        idf=tuple(idf_all[g] for g in selected),
    )

    X = np.stack([_vector(counts, space) for counts in docs])
    y = np.where(is_reg, 1.0, -1.0)

    w = np.zeros(space.k)
    b = 0.0
    for _ in range(_MAX_ITER):
        z = y * (X @ w + b)
        # d/dz of log(1+exp(-z)) is -sigmoid(-z); cap z to dodge exp overflow
        sig = 1.0 / (1.0 + np.exp(np.minimum(z, 500.0)))
        grad_w = -(X.T @ (y * sig)) / n_docs + _L2 * w
        grad_b = -float(np.sum(y * sig)) / n_docs
        if max(np.max(np.abs(grad_w)), abs(grad_b)) < _GRAD_TOL:
            break
        w -= _STEP * grad_w
        b -= _STEP * grad_b

    return ClassifierModel(
        feature_space=space,
        weights=tuple(float(v) for v in w),
        intercept=float(b),
        training_seed=seed,
    )


def predict(
    model: ClassifierModel, statement: Statement
) -> tuple[StatementType, float]:
    """Signed decision value and the class it implies.

    Statements with no in-vocabulary n-grams score exactly the intercept.
    """
    counts = Counter(extract_ngrams(statement))
    x = _vector(counts, model.feature_space)
    score = float(np.dot(np.asarray(model.weights), x) + model.intercept)
    label = (
        StatementType.REGULATIVE
        if score > model.threshold
        else StatementType.CONSTITUTIVE
    )
    return label, score


def evaluate_classifier(
    model: ClassifierModel, test: list[tuple[Statement, StatementType]]
) -> dict[str, dict[str, float]]:
    """One-vs-rest precision/recall/F1 per class plus the macro average."""
    if not test:
        raise TrainingError("empty test set")
    pairs = [(predict(model, stmt)[0], gold) for stmt, gold in test]
    report: dict[str, dict[str, float]] = {}
    f1s, precs, recs = [], [], []
    for cls in (StatementType.REGULATIVE, StatementType.CONSTITUTIVE):
        tp = sum(1 for p, g in pairs if p is cls and g is cls)
        n_pred = sum(1 for p, _ in pairs if p is cls)
        n_gold = sum(1 for _, g in pairs if g is cls)
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / n_gold if n_gold else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        report[cls.value] = {"precision": precision, "recall": recall, "f1": f1}
        precs.append(precision)
        recs.append(recall)
        f1s.append(f1)
    report["macro"] = {
        "precision": sum(precs) / len(precs),
        "recall": sum(recs) / len(recs),
        "f1": sum(f1s) / len(f1s),
    }
    return report
