"""Year-by-year assessment over cumulative corpus slices.

A technology joins the assessment in its onset year: the first year at or
after the floor year in which its annual record count reaches the given
share of its total volume. For each year with at least two active
technologies, the cross-citation matrix is rebuilt from records published
up to that year and every requested method is scored on it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .advancement import ModelParams, advancement_index
from .baselines import degree_centrality, g_index, h_index, intra_counts, profile_from_corpus
from .errors import AllZeroMatrix, EmptySeries, InvalidRange, NoAssessableYear
from .graph import build_matrix
from .records import TechCorpus

ADVANCEMENT = "advancement"
H_INDEX = "h_index"
G_INDEX = "g_index"
IN_CENTRALITY = "in_centrality"
OUT_CENTRALITY = "out_centrality"
METHODS = (ADVANCEMENT, H_INDEX, G_INDEX, IN_CENTRALITY, OUT_CENTRALITY)

DEFAULT_FLOOR_YEAR = 2010
DEFAULT_ONSET_SHARE = 0.01
DEFAULT_FROM_YEAR = 2000


@dataclass(frozen=True)
class VolumeSeries:
    """Per-year record counts for one technology; total is always their sum."""

    label: str
    counts: Mapping[int, int]
    total: int = field(init=False)

    def __post_init__(self):
        counts = {int(y): int(c) for y, c in sorted(self.counts.items())}
        if any(c < 0 for c in counts.values()):
            raise ValueError("yearly counts must be non-negative")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", sum(counts.values()))


def volume_series(corpus: TechCorpus) -> VolumeSeries:
    """Counts of dated records per publication year (undated records excluded)."""
    counts: dict[int, int] = {}
    for record in corpus.records:
        if record.pub_year is not None:
            counts[record.pub_year] = counts.get(record.pub_year, 0) + 1
    return VolumeSeries(label=corpus.label, counts=counts)


def onset_year(volumes: VolumeSeries, floor_year: int = DEFAULT_FLOOR_YEAR,
               share: float = DEFAULT_ONSET_SHARE) -> int | None:
    """First year >= floor_year whose count reaches the share of the total."""
    if volumes.total == 0:
        raise EmptySeries(f"{volumes.label!r} has no dated records")
    for year, count in volumes.counts.items():
        if year >= floor_year and count / volumes.total >= share:
            return year
    return None


def cumulative_slice(corpus: TechCorpus, through_year: int,
                     from_year: int = DEFAULT_FROM_YEAR) -> TechCorpus:
    """Records published in [from_year, through_year]; undated records drop out."""
    if from_year > through_year:
        raise InvalidRange(f"from_year {from_year} exceeds through_year {through_year}")
    kept = tuple(r for r in corpus.records
                 if r.pub_year is not None and from_year <= r.pub_year <= through_year)
    return TechCorpus(label=corpus.label, records=kept, query_terms=corpus.query_terms)


@dataclass(frozen=True)
class YearScores:
    """Scores for one assessment year; empty scores flag a year with fewer
    than two active technologies."""

    year: int
    active: tuple[str, ...]
    scores: Mapping[str, Mapping[str, float]]

    @property
    def assessable(self) -> bool:
        return len(self.active) >= 2


def method_scores(corpora: Sequence[TechCorpus], methods: Sequence[str] = METHODS,
                  params: ModelParams | None = None, include_intra: bool = False,
                  multiset: bool = False) -> dict[str, dict[str, float]]:
    """Score each requested method over one set of corpora (one matrix build).

    Centralities are left out when the matrix carries no citations at all.
    """
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method(s): {', '.join(unknown)}")
    matrix = build_matrix(corpora, multiset=multiset)
    scores: dict[str, dict[str, float]] = {}
    if ADVANCEMENT in methods:
        scores[ADVANCEMENT] = advancement_index(matrix, params).as_mapping()
    if H_INDEX in methods or G_INDEX in methods:
        profiles = {c.label: profile_from_corpus(c) for c in corpora}
        if H_INDEX in methods:
            scores[H_INDEX] = {lbl: float(h_index(p)) for lbl, p in profiles.items()}
        if G_INDEX in methods:
            scores[G_INDEX] = {lbl: float(g_index(p)) for lbl, p in profiles.items()}
    if IN_CENTRALITY in methods or OUT_CENTRALITY in methods:
        intra = intra_counts(corpora, multiset) if include_intra else None
        try:
            centrality = degree_centrality(matrix, intra=intra)
        except AllZeroMatrix:
            centrality = None
        if centrality is not None:
            by_in, by_out = centrality.as_mappings()
            if IN_CENTRALITY in methods:
                scores[IN_CENTRALITY] = by_in
            if OUT_CENTRALITY in methods:
                scores[OUT_CENTRALITY] = by_out
    return scores


def score_series(corpora: Sequence[TechCorpus], years: Iterable[int],
                 methods: Sequence[str] = METHODS,
                 params: ModelParams | None = None,
                 floor_year: int = DEFAULT_FLOOR_YEAR,
                 share: float = DEFAULT_ONSET_SHARE,
                 from_year: int = DEFAULT_FROM_YEAR,
                 include_intra: bool = False,
                 multiset: bool = False) -> list[YearScores]:
    """Score every requested method for each year's active technologies.

    Years where fewer than two technologies have reached onset produce an
    empty-scores entry; centralities are omitted for years whose matrix has
    no citations yet.
    """
    years = sorted(set(int(y) for y in years))
    if not years:
        raise NoAssessableYear("no assessment years given")
    onsets: dict[str, int | None] = {}
    for corpus in corpora:
        volumes = volume_series(corpus)
        onsets[corpus.label] = (onset_year(volumes, floor_year, share)
                                if volumes.total else None)
    series: list[YearScores] = []
    for year in years:
        active = [c for c in corpora
                  if onsets[c.label] is not None and onsets[c.label] <= year]
        labels = tuple(c.label for c in active)
        if len(active) < 2:
            series.append(YearScores(year=year, active=labels, scores={}))
            continue
        slices = [cumulative_slice(c, year, from_year) for c in active]
        scores = method_scores(slices, methods, params, include_intra, multiset)
        series.append(YearScores(year=year, active=labels, scores=scores))
    if not any(entry.assessable for entry in series):
        raise NoAssessableYear("no year in the range has two active technologies")
    return series


# --- long-form CSV files ---

def write_series(series: Sequence[YearScores], dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["year", "label", "method", "score"])
    for entry in series:
        for method in METHODS:
            if method not in entry.scores:
                continue
            for label in entry.active:
                writer.writerow([entry.year, label, method, repr(entry.scores[method][label])])
    _write(dest, buffer.getvalue())


def read_series(source: str | Path | IO[str]) -> list[YearScores]:
    rows = _read_rows(source)
    by_year: dict[int, dict[str, dict[str, float]]] = {}
    for row in rows:
        year = int(row["year"])
        by_year.setdefault(year, {}).setdefault(row["method"], {})[row["label"]] = float(row["score"])
    series = []
    for year in sorted(by_year):
        methods = by_year[year]
        active = sorted({label for scores in methods.values() for label in scores})
        series.append(YearScores(year=year, active=tuple(active), scores=methods))
    return series


def write_volumes(series: Sequence[VolumeSeries], dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label", "year", "count"])
    for volumes in series:
        for year, count in volumes.counts.items():
            writer.writerow([volumes.label, year, count])
    _write(dest, buffer.getvalue())


def read_volumes(source: str | Path | IO[str]) -> list[VolumeSeries]:
    rows = _read_rows(source)
    counts: dict[str, dict[int, int]] = {}
    for row in rows:
        counts.setdefault(row["label"], {})[int(row["year"])] = int(row["count"])
    return [VolumeSeries(label=label, counts=by_year) for label, by_year in counts.items()]


def _read_rows(source: str | Path | IO[str]) -> list[dict[str, str]]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        text = source.read()
    return list(csv.DictReader(io.StringIO(text)))


def _write(dest: str | Path | IO[str], text: str) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)
