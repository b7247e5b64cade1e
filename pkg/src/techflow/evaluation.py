"""Ranking accuracy of each scoring method against a declared truth order.

The default metric is pairwise concordance: the fraction of technology pairs
whose score order matches the declared least-to-most-advanced order, with
score ties worth half credit. The alternative top-1 metric only asks whether
the method puts the truly most advanced technology first.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import IO, Mapping, Sequence

from .errors import NoEvaluableYear, TooFewLabels, UnknownLabel
from .timeseries import YearScores

PAIRWISE = "pairwise"
TOP1 = "top1"
METRICS = (PAIRWISE, TOP1)


@dataclass(frozen=True)
class GroundTruth:
    """Technology labels ordered least to most advanced."""

    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order):
            raise ValueError("truth order must not repeat labels")
        if len(self.order) < 2:
            raise TooFewLabels("truth order needs at least two labels")

    def position(self, label: str) -> int:
        try:
            return self.order.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} is not in the truth order") from None


def _checked_labels(scores: Mapping[str, float], truth: GroundTruth) -> list[str]:
    labels = list(scores)
    for label in labels:
        truth.position(label)
    if len(labels) < 2:
        raise TooFewLabels("accuracy needs scores for at least two labels")
    return labels


def pairwise_accuracy(scores: Mapping[str, float], truth: GroundTruth) -> float:
    """Fraction of label pairs ranked concordantly with the truth; ties get 0.5."""
    labels = _checked_labels(scores, truth)
    credit = 0.0
    pairs = 0
    for a, b in combinations(labels, 2):
        pairs += 1
        truth_sign = truth.position(a) - truth.position(b)
        score_diff = scores[a] - scores[b]
        if score_diff == 0:
            credit += 0.5
        elif (score_diff > 0) == (truth_sign > 0):
            credit += 1.0
    return credit / pairs


def top1_accuracy(scores: Mapping[str, float], truth: GroundTruth) -> float:
    """1 when the truly most advanced of the scored labels tops the scores;
    a tie at the top splits the credit evenly among the tied labels."""
    labels = _checked_labels(scores, truth)
    best_label = max(labels, key=truth.position)
    top_score = max(scores.values())
    tied = [label for label in labels if scores[label] == top_score]
    return 1.0 / len(tied) if best_label in tied else 0.0


_METRIC_FUNCTIONS = {PAIRWISE: pairwise_accuracy, TOP1: top1_accuracy}


@dataclass(frozen=True)
class EvaluationReport:
    methods: tuple[str, ...]
    overall: Mapping[str, float]
    mean_annual: Mapping[str, float]
    annual: Mapping[str, Mapping[int, float]]
    metric: str = PAIRWISE

    def __post_init__(self):
        values = list(self.overall.values()) + list(self.mean_annual.values())
        for per_year in self.annual.values():
            values.extend(per_year.values())
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("accuracies must lie in [0, 1]")


def evaluate_methods(series: Sequence[YearScores],
                     full_period_scores: Mapping[str, Mapping[str, float]],
                     truth: GroundTruth, metric: str = PAIRWISE) -> EvaluationReport:
    """Overall accuracy from the full-period scores, annual accuracies from
    the series (years with fewer than two scored labels are skipped)."""
    if metric not in _METRIC_FUNCTIONS:
        raise ValueError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")
    accuracy = _METRIC_FUNCTIONS[metric]
    methods = tuple(full_period_scores)
    overall = {m: accuracy(full_period_scores[m], truth) for m in methods}
    annual: dict[str, dict[int, float]] = {m: {} for m in methods}
    for entry in series:
        for method in methods:
            scores = entry.scores.get(method)
            if scores and len(scores) >= 2:
                annual[method][entry.year] = accuracy(scores, truth)
    evaluable = tuple(m for m in methods if annual[m])
    if not evaluable:
        raise NoEvaluableYear("no year in the series has two scored technologies")
    mean_annual = {m: sum(annual[m].values()) / len(annual[m]) for m in evaluable}
    return EvaluationReport(
        methods=evaluable,
        overall={m: overall[m] for m in evaluable},
        mean_annual=mean_annual,
        annual={m: annual[m] for m in evaluable},
        metric=metric,
    )


# --- report files ---

def write_report(report: EvaluationReport, dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["method", "overall_accuracy", "mean_annual_accuracy"])
    for method in report.methods:
        writer.writerow([method, repr(report.overall[method]), repr(report.mean_annual[method])])
    _write(dest, buffer.getvalue())


def write_annual(report: EvaluationReport, dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["method", "year", "accuracy"])
    for method in report.methods:
        for year in sorted(report.annual[method]):
            writer.writerow([method, year, repr(report.annual[method][year])])
    _write(dest, buffer.getvalue())


def read_report(source: str | Path | IO[str]) -> dict[str, dict[str, float]]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        text = source.read()
    result: dict[str, dict[str, float]] = {}
    for row in csv.DictReader(io.StringIO(text)):
        result[row["method"]] = {
            "overall_accuracy": float(row["overall_accuracy"]),
            "mean_annual_accuracy": float(row["mean_annual_accuracy"]),
        }
    return result


def _write(dest: str | Path | IO[str], text: str) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)
