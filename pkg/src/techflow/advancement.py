"""The relative-advancement score over a cross-citation matrix.

For technology i against each other technology j, take the smoothed citation
ratio (C_ij + 1) / (C_ji + 1) — above 1 when i draws on j more than j draws
on i, the signature of the newer technology — and average the ratios with
weights log_base(C_ij * C_ji + offset), so heavily connected pairs dominate.
The 1/(k-1) factor keeps scores comparable across matrix sizes. The weight's
base cancels between numerator and denominator, so any base > 1 gives the
same score; the offset keeps every weight positive as long as it exceeds 1.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping

from .errors import IndexOutOfRange, InvalidParams, SameIndex, SchemaError
from .graph import CrossCitationMatrix, _check_index


@dataclass(frozen=True)
class ModelParams:
    """Scoring knobs: weight logarithm base and additive offset."""

    log_base: float = 2.0
    offset: float = 2.0

    def __post_init__(self):
        if self.log_base <= 1:
            raise InvalidParams(f"log base must exceed 1, got {self.log_base}")
        if self.offset <= 0:
            raise InvalidParams(f"offset must be positive, got {self.offset}")


class Dominance(enum.Enum):
    FIRST_MORE_ADVANCED = "first_more_advanced"
    SECOND_MORE_ADVANCED = "second_more_advanced"
    TIE = "tie"


def pairwise_dominance(matrix: CrossCitationMatrix, i: int, j: int) -> Dominance:
    """Which of two technologies draws more on the other: the one citing more
    is read as the more advanced of the pair."""
    _check_index(matrix, i)
    _check_index(matrix, j)
    if i == j:
        raise SameIndex(f"dominance needs two distinct technologies, got index {i} twice")
    if matrix.counts[i][j] > matrix.counts[j][i]:
        return Dominance.FIRST_MORE_ADVANCED
    if matrix.counts[i][j] < matrix.counts[j][i]:
        return Dominance.SECOND_MORE_ADVANCED
    return Dominance.TIE


@dataclass(frozen=True)
class AdvancementResult:
    labels: tuple[str, ...]
    scores: tuple[float, ...]
    params: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self):
        if len(self.labels) != len(self.scores):
            raise ValueError("labels and scores must have equal length")
        for label, score in zip(self.labels, self.scores):
            if not math.isfinite(score) or score <= 0:
                raise ValueError(f"score for {label!r} must be finite and positive, got {score}")

    def score(self, label: str) -> float:
        try:
            return self.scores[self.labels.index(label)]
        except ValueError:
            raise IndexOutOfRange(f"unknown technology label {label!r}") from None

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(self.labels, self.scores))


def advancement_index(matrix: CrossCitationMatrix,
                      params: ModelParams | None = None) -> AdvancementResult:
    """Score every technology in the matrix; higher means more advanced."""
    params = params or ModelParams()
    k = matrix.k
    log_base = math.log(params.log_base)
    scores = []
    for i in range(k):
        weighted = 0.0
        total_weight = 0.0
        for j in range(k):
            if j == i:
                continue
            c_ij = matrix.counts[i][j]
            c_ji = matrix.counts[j][i]
            ratio = (c_ij + 1) / (c_ji + 1)
            weight = math.log(c_ij * c_ji + params.offset) / log_base
            weighted += ratio * weight
            total_weight += weight
        scores.append(weighted / total_weight / (k - 1))
    return AdvancementResult(labels=matrix.labels, scores=tuple(scores), params=params)


def rank(result: AdvancementResult) -> list[list[str]]:
    """Labels ordered by descending score; equal scores share one tie group."""
    ordered = sorted(zip(result.scores, result.labels), key=lambda pair: -pair[0])
    groups: list[list[str]] = []
    last_score = None
    for score, label in ordered:
        if groups and score == last_score:
            groups[-1].append(label)
        else:
            groups.append([label])
            last_score = score
    return groups


# --- score files ---

def write_scores(result: AdvancementResult, dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label", "score", "log_base", "offset"])
    for label, score in zip(result.labels, result.scores):
        writer.writerow([label, repr(score), result.params.log_base, result.params.offset])
    _write(dest, buffer.getvalue())


def write_scores_json(result: AdvancementResult, dest: str | Path | IO[str]) -> None:
    obj = {
        "labels": list(result.labels),
        "scores": list(result.scores),
        "ranking": rank(result),
        "params": {"log_base": result.params.log_base, "offset": result.params.offset},
    }
    _write(dest, json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def read_scores(source: str | Path | IO[str]) -> AdvancementResult:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        text = source.read()
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise SchemaError("score file has no rows")
    labels = tuple(row["label"] for row in rows)
    scores = tuple(float(row["score"]) for row in rows)
    params = ModelParams(log_base=float(rows[0]["log_base"]), offset=float(rows[0]["offset"]))
    return AdvancementResult(labels=labels, scores=scores, params=params)


def _write(dest: str | Path | IO[str], text: str) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)
