"""Relevance filtering of retrieved corpora.

Pipeline: tokenize abstracts, weight terms by tf-idf, train a soft-margin
linear separator on hand-labeled examples (1 = relevant, 0 = irrelevant),
then classify the full retrieved pool. The sample-size stability analysis
reruns the classifier at growing training sizes n (steps of 100) and tracks
sigma_n = |relevant(n) - relevant(n - 100)| / target_size until it plateaus.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np
from scipy import sparse
from sklearn.svm import SVC

from .errors import (
    EmptyCorpus,
    PoolTooSmall,
    SchemaError,
    SingleClass,
    TooFewExamples,
)
from .records import BiblioRecord, TechCorpus, record_from_dict, record_to_dict

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_STEP = 100  # stability compares n with n - 100

DEFAULT_PENALTY = 1.0
DEFAULT_SPLIT = 0.2
DEFAULT_SAMPLE_SIZE = 1000
STABILITY_THRESHOLD = 0.01


def _stopwords() -> frozenset[str]:
    global _STOPWORDS
    try:
        return _STOPWORDS
    except NameError:
        text = resources.files("techflow").joinpath("data/stopwords.txt").read_text("utf-8")
        _STOPWORDS = frozenset(text.split())
        return _STOPWORDS


def preprocess(text: str) -> list[str]:
    """Lowercase alphanumeric tokens of length >= 2, stop-words removed."""
    stop = _stopwords()
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2 and t not in stop]


def fit_features(corpus: Sequence[Sequence[str]]) -> tuple[dict[str, int], tuple[float, ...]]:
    """Build the term -> column map and smoothed idf weights from tokenized docs.

    idf(t) = ln((1 + D) / (1 + df(t))) + 1, D = number of documents.
    """
    if not corpus:
        raise EmptyCorpus("cannot fit features on an empty corpus")
    df: dict[str, int] = {}
    for doc in corpus:
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise EmptyCorpus("no usable tokens in any document")
    vocabulary = {term: col for col, term in enumerate(sorted(df))}
    n_docs = len(corpus)
    idf = tuple(math.log((1 + n_docs) / (1 + df[t])) + 1 for t in sorted(df))
    return vocabulary, idf


def transform(corpus: Sequence[Sequence[str]], vocabulary: dict[str, int],
              idf: Sequence[float]) -> sparse.csr_matrix:
    """tf-idf document vectors, L2-normalized row-wise. Unknown terms are ignored."""
    idf_arr = np.asarray(idf, dtype=float)
    rows, cols, vals = [], [], []
    for i, doc in enumerate(corpus):
        counts: dict[int, int] = {}
        for term in doc:
            col = vocabulary.get(term)
            if col is not None:
                counts[col] = counts.get(col, 0) + 1
        if not counts:
            continue
        weighted = {col: tf * idf_arr[col] for col, tf in counts.items()}
        norm = math.sqrt(sum(v * v for v in weighted.values()))
        for col, v in sorted(weighted.items()):
            rows.append(i)
            cols.append(col)
            vals.append(v / norm)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(len(corpus), len(vocabulary)))


@dataclass(frozen=True)
class LabeledExample:
    """A record with a human relevance judgment (1 = relevant, 0 = irrelevant)."""

    record: BiblioRecord
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class ClassifierModel:
    """Frozen linear separator over a tf-idf vocabulary; fully JSON-serializable."""

    vocabulary: dict[str, int]
    idf: tuple[float, ...]
    weights: tuple[float, ...]
    bias: float
    penalty: float
    seed: int

    def __post_init__(self):
        if not len(self.vocabulary) == len(self.idf) == len(self.weights):
            raise ValueError("vocabulary, idf, and weights must have equal length")
        if self.penalty <= 0:
            raise ValueError("penalty must be positive")


def _record_text(record: BiblioRecord) -> str:
    return record.abstract


def decision_values(model: ClassifierModel, records: Sequence[BiblioRecord]) -> np.ndarray:
    docs = [preprocess(_record_text(r)) for r in records]
    x = transform(docs, model.vocabulary, model.idf)
    return x @ np.asarray(model.weights) + model.bias


def classify(model: ClassifierModel, records: Sequence[BiblioRecord]) -> list[int]:
    """1 iff the decision value is strictly positive; exact zero counts 0."""
    return [1 if v > 0 else 0 for v in decision_values(model, records)]


def _split_by_label(examples: Sequence[LabeledExample]) -> tuple[list[int], list[int]]:
    relevant = [i for i, e in enumerate(examples) if e.label == 1]
    irrelevant = [i for i, e in enumerate(examples) if e.label == 0]
    return relevant, irrelevant


def _balance(examples: Sequence[LabeledExample], rng: np.random.Generator) -> list[LabeledExample]:
    # 1:1 class ratio by down-sampling the majority class
    relevant, irrelevant = _split_by_label(examples)
    m = min(len(relevant), len(irrelevant))
    keep: list[int] = []
    for idx in (relevant, irrelevant):
        if len(idx) > m:
            keep.extend(sorted(rng.choice(idx, size=m, replace=False)))
        else:
            keep.extend(idx)
    return [examples[i] for i in sorted(keep)]


def train(examples: Sequence[LabeledExample], split: float = DEFAULT_SPLIT,
          penalty: float = DEFAULT_PENALTY, seed: int = 0) -> tuple[ClassifierModel, float]:
    """Fit the soft-margin linear separator; returns (model, holdout accuracy).

    Classes are balanced 1:1 by down-sampling, then a random holdout of the
    given fraction is withheld for the accuracy estimate. Deterministic per
    seed. split=0 trains on everything and reports accuracy as NaN.
    """
    if not 0 <= split < 1:
        raise ValueError(f"split must lie in [0, 1), got {split}")
    relevant, irrelevant = _split_by_label(examples)
    if not relevant or not irrelevant:
        raise SingleClass("training needs both relevant and irrelevant examples")
    if min(len(relevant), len(irrelevant)) < 10:
        raise TooFewExamples("training needs at least 10 examples per class")
    rng = np.random.default_rng(seed)
    balanced = _balance(examples, rng)
    order = rng.permutation(len(balanced))
    n_test = int(round(split * len(balanced)))
    test = [balanced[i] for i in order[:n_test]]
    fit = [balanced[i] for i in order[n_test:]]

    docs = [preprocess(_record_text(e.record)) for e in fit]
    vocabulary, idf = fit_features(docs)
    x = transform(docs, vocabulary, idf)
    y = np.array([e.label for e in fit])
    svc = SVC(kernel="linear", C=penalty, tol=1e-4)
    svc.fit(x, y)
    coef = svc.coef_
    if sparse.issparse(coef):
        coef = coef.toarray()
    model = ClassifierModel(
        vocabulary=vocabulary,
        idf=idf,
        weights=tuple(float(w) for w in np.ravel(coef)),
        bias=float(svc.intercept_[0]),
        penalty=float(penalty),
        seed=int(seed),
    )
    if not test:
        return model, float("nan")
    predicted = classify(model, [e.record for e in test])
    accuracy = sum(p == e.label for p, e in zip(predicted, test)) / len(test)
    return model, accuracy


@dataclass(frozen=True)
class StabilityPoint:
    n: int
    relevant_count: int
    stability: float | None  # None for the first point (no n - 100 to compare)


@dataclass(frozen=True)
class StabilityCurve:
    points: tuple[StabilityPoint, ...]
    target_size: int

    def __post_init__(self):
        if self.target_size <= 0:
            raise ValueError("target_size must be positive")
        ns = [p.n for p in self.points]
        if any(b - a != _STEP for a, b in zip(ns, ns[1:])):
            raise ValueError("sample sizes must increase in steps of 100")
        for p in self.points:
            if p.stability is not None and (p.n <= _STEP or p.stability < 0):
                raise ValueError(f"invalid stability value at n={p.n}")


def stability_value(count: int, previous_count: int, target_size: int) -> float:
    """Normalized change in the relevant-classified count for one +100 step."""
    if target_size <= 0:
        raise ValueError("target_size must be positive")
    return abs(count - previous_count) / target_size


def _balanced_sample(examples: Sequence[LabeledExample], n: int,
                     rng: np.random.Generator) -> list[LabeledExample]:
    relevant, irrelevant = _split_by_label(examples)
    half = n // 2
    if len(relevant) < half or len(irrelevant) < half:
        raise PoolTooSmall(
            f"balanced sample of {n} needs {half} per class; "
            f"pool has {len(relevant)} relevant / {len(irrelevant)} irrelevant"
        )
    keep = sorted(rng.choice(relevant, size=half, replace=False))
    keep += sorted(rng.choice(irrelevant, size=half, replace=False))
    return [examples[i] for i in keep]


def stability_curve(pool: Sequence[LabeledExample], classify_target: TechCorpus,
                    max_n: int, seed: int = 0, split: float = DEFAULT_SPLIT,
                    penalty: float = DEFAULT_PENALTY) -> StabilityCurve:
    """Classify the target corpus with training samples of 100, 200, ..., max_n.

    Each point draws its own balanced sample and derived seed, so points are
    independent; sigma at n is computed from the stored counts at n and n-100.
    """
    if max_n < 2 * _STEP:
        raise ValueError(f"max_n must be at least {2 * _STEP}")
    target_size = len(classify_target.records)
    if target_size == 0:
        raise EmptyCorpus("classification target is empty")
    relevant, irrelevant = _split_by_label(pool)
    if min(len(relevant), len(irrelevant)) < max_n // 2:
        raise PoolTooSmall(
            f"pool with {len(relevant)} relevant / {len(irrelevant)} irrelevant "
            f"cannot supply a balanced sample of {max_n}"
        )
    counts: list[int] = []
    for n in range(_STEP, max_n + 1, _STEP):
        rng = np.random.default_rng([seed, n])
        sample = _balanced_sample(pool, n, rng)
        model, _ = train(sample, split=split, penalty=penalty, seed=int(rng.integers(2**31)))
        counts.append(sum(classify(model, classify_target.records)))
    points = [StabilityPoint(_STEP, counts[0], None)]
    for i in range(1, len(counts)):
        sigma = stability_value(counts[i], counts[i - 1], target_size)
        points.append(StabilityPoint(_STEP * (i + 1), counts[i], sigma))
    return StabilityCurve(points=tuple(points), target_size=target_size)


def stable_sample_size(curve: StabilityCurve, threshold: float = STABILITY_THRESHOLD) -> int | None:
    """Smallest n from which every later sigma stays below the threshold."""
    result = None
    for p in reversed([p for p in curve.points if p.stability is not None]):
        if p.stability < threshold:
            result = p.n
        else:
            break
    return result


# --- file formats ---

def save_labeled(examples: Iterable[LabeledExample], dest: str | Path | IO[str]) -> None:
    lines = []
    for e in examples:
        obj = record_to_dict(e.record)
        obj["label"] = e.label
        lines.append(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
    text = "".join(line + "\n" for line in lines)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)


def load_labeled(source: Union[str, Path, IO[str], IO[bytes]]) -> list[LabeledExample]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    examples = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        obj = json.loads(line)
        if "label" not in obj:
            raise SchemaError(f"line {lineno}: missing label")
        label = obj.pop("label")
        if label not in (0, 1):
            raise SchemaError(f"line {lineno}: label must be 0 or 1")
        examples.append(LabeledExample(record_from_dict(obj, where=f"line {lineno}"), label))
    return examples


def save_model(model: ClassifierModel, dest: str | Path | IO[str]) -> None:
    obj = {
        "vocabulary": model.vocabulary,
        "idf": list(model.idf),
        "weights": list(model.weights),
        "bias": model.bias,
        "penalty": model.penalty,
        "seed": model.seed,
    }
    text = json.dumps(obj, ensure_ascii=False, indent=2) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)


def load_model(source: Union[str, Path, IO[str], IO[bytes]]) -> ClassifierModel:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file is not valid JSON: {exc}") from exc
    missing = [k for k in ("vocabulary", "idf", "weights", "bias", "penalty", "seed") if k not in obj]
    if missing:
        raise SchemaError(f"model file missing key(s): {', '.join(missing)}")
    try:
        return ClassifierModel(
            vocabulary={str(t): int(c) for t, c in obj["vocabulary"].items()},
            idf=tuple(float(v) for v in obj["idf"]),
            weights=tuple(float(v) for v in obj["weights"]),
            bias=float(obj["bias"]),
            penalty=float(obj["penalty"]),
            seed=int(obj["seed"]),
        )
    except (TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"model file has ill-typed fields: {exc}") from exc
