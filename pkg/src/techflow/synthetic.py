"""Deterministic synthetic studies with planted citation structure.

The generator plants every citation edge explicitly and returns the tally it
planted, so matrix-building code can be checked cell-for-cell instead of
statistically. Citing papers only reference papers already published (same
year or earlier), which keeps cumulative year slices consistent. Abstracts
come from disjoint relevant/irrelevant vocabularies so the classifier has a
separable problem with a known answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidSpec
from .filtering import LabeledExample
from .records import BiblioRecord, TechCorpus

_RELEVANT_VOCAB = tuple(f"rel{i:03d}" for i in range(60))
_IRRELEVANT_VOCAB = tuple(f"irr{i:03d}" for i in range(60))
_WORDS_PER_ABSTRACT = 10


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for one study.

    cite_rate[i][j] is the expected number of references a tech-i paper makes
    into tech j's corpus (diagonal = within-tech references). When omitted it
    is derived from planted_order: every tech cites less advanced ones at
    cite_base plus a boost growing with the rank gap, and more advanced ones
    at cite_base only.
    """

    labels: tuple[str, ...]
    start_years: tuple[int, ...]
    end_year: int
    papers_per_year: int = 20
    cite_rate: tuple[tuple[float, ...], ...] | None = None
    planted_order: tuple[str, ...] | None = None
    cite_base: float = 0.3
    cite_boost: float = 3.0
    citedness: tuple[float, ...] | None = None
    pool_relevant: int = 0
    pool_irrelevant: int = 0
    target_relevant: int = 0
    target_noise: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "start_years", tuple(int(y) for y in self.start_years))
        if self.cite_rate is not None:
            object.__setattr__(self, "cite_rate",
                               tuple(tuple(float(v) for v in row) for row in self.cite_rate))
        if self.planted_order is not None:
            object.__setattr__(self, "planted_order", tuple(self.planted_order))
        if self.citedness is not None:
            object.__setattr__(self, "citedness", tuple(float(v) for v in self.citedness))
        k = len(self.labels)
        if k < 2 or len(set(self.labels)) != k:
            raise InvalidSpec("need at least two distinct technology labels")
        if len(self.start_years) != k:
            raise InvalidSpec("start_years must give one year per technology")
        if any(y > self.end_year for y in self.start_years):
            raise InvalidSpec("every start year must be <= end_year")
        if self.papers_per_year < 1:
            raise InvalidSpec("papers_per_year must be positive")
        if self.cite_rate is not None:
            if len(self.cite_rate) != k or any(len(row) != k for row in self.cite_rate):
                raise InvalidSpec(f"cite_rate must be a {k}x{k} table")
            if any(v < 0 for row in self.cite_rate for v in row):
                raise InvalidSpec("cite rates must be non-negative")
        if self.planted_order is not None and sorted(self.planted_order) != sorted(self.labels):
            raise InvalidSpec("planted_order must be a permutation of the labels")
        if self.citedness is not None and (len(self.citedness) != k
                                           or any(v < 0 for v in self.citedness)):
            raise InvalidSpec("citedness must give one non-negative mean per technology")
        if min(self.pool_relevant, self.pool_irrelevant,
               self.target_relevant, self.target_noise) < 0:
            raise InvalidSpec("pool and target sizes must be non-negative")

    @property
    def k(self) -> int:
        return len(self.labels)

    def rates(self) -> tuple[tuple[float, ...], ...]:
        if self.cite_rate is not None:
            return self.cite_rate
        order = self.planted_order or self.labels
        position = {label: order.index(label) for label in self.labels}
        rows = []
        for citing in self.labels:
            row = []
            for cited in self.labels:
                if citing == cited:
                    row.append(0.0)
                    continue
                gap = position[citing] - position[cited]
                boost = self.cite_boost * gap / max(1, self.k - 1) if gap > 0 else 0.0
                row.append(self.cite_base + boost)
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class SyntheticStudy:
    spec: SyntheticSpec
    corpora: tuple[TechCorpus, ...]
    planted_counts: tuple[tuple[int, ...], ...]  # k x k ledger; diagonal = within-tech
    labeled_pool: tuple[LabeledExample, ...]
    unfiltered: TechCorpus | None

    def planted_cross_counts(self) -> tuple[tuple[int, ...], ...]:
        """The ledger with the diagonal zeroed, i.e. the expected matrix cells."""
        return tuple(tuple(0 if i == j else c for j, c in enumerate(row))
                     for i, row in enumerate(self.planted_counts))


def _abstract(rng: np.random.Generator, vocab: Sequence[str]) -> str:
    return " ".join(rng.choice(vocab, size=_WORDS_PER_ABSTRACT))


def generate(spec: SyntheticSpec) -> SyntheticStudy:
    """Build the study deterministically from the spec's seed."""
    rng = np.random.default_rng(spec.seed)
    rates = spec.rates()
    citedness = spec.citedness or tuple(4.0 for _ in spec.labels)

    papers: list[list[dict]] = []
    for i, label in enumerate(spec.labels):
        tech_papers = []
        for year in range(spec.start_years[i], spec.end_year + 1):
            for p in range(spec.papers_per_year):
                tech_papers.append({
                    "doi": f"10.5555/{label.lower()}.{year}.{p}",
                    "title": f"{label} study {year}-{p}",
                    "abstract": _abstract(rng, _RELEVANT_VOCAB),
                    "year": year,
                    "cited": int(rng.poisson(citedness[i])),
                    "refs": [],
                })
        papers.append(tech_papers)

    ledger = [[0] * spec.k for _ in range(spec.k)]
    for i in range(spec.k):
        for paper in papers[i]:
            for j in range(spec.k):
                rate = rates[i][j]
                if rate == 0.0:
                    continue
                candidates = [q["doi"] for q in papers[j]
                              if q["year"] <= paper["year"] and q["doi"] != paper["doi"]]
                wanted = int(rng.poisson(rate))
                n = min(wanted, len(candidates))
                if n == 0:
                    continue
                picks = rng.choice(len(candidates), size=n, replace=False)
                paper["refs"].extend(candidates[idx] for idx in sorted(picks))
                ledger[i][j] += n

    corpora = []
    for i, label in enumerate(spec.labels):
        records = tuple(
            BiblioRecord(doi=p["doi"], title=p["title"], abstract=p["abstract"],
                         pub_year=p["year"], times_cited=p["cited"],
                         cited_dois=tuple(p["refs"]))
            for p in papers[i]
        )
        corpora.append(TechCorpus(label=label, records=records))

    mid_year = (min(spec.start_years) + spec.end_year) // 2
    pool = []
    for n in range(spec.pool_relevant):
        record = BiblioRecord(doi=f"10.5555/pool.rel.{n}", abstract=_abstract(rng, _RELEVANT_VOCAB),
                              pub_year=mid_year)
        pool.append(LabeledExample(record, 1))
    for n in range(spec.pool_irrelevant):
        record = BiblioRecord(doi=f"10.5555/pool.irr.{n}", abstract=_abstract(rng, _IRRELEVANT_VOCAB),
                              pub_year=mid_year)
        pool.append(LabeledExample(record, 0))

    unfiltered = None
    if spec.target_relevant or spec.target_noise:
        target = [BiblioRecord(doi=f"10.5555/target.rel.{n}",
                               abstract=_abstract(rng, _RELEVANT_VOCAB), pub_year=mid_year)
                  for n in range(spec.target_relevant)]
        target += [BiblioRecord(doi=f"10.5555/target.irr.{n}",
                                abstract=_abstract(rng, _IRRELEVANT_VOCAB), pub_year=mid_year)
                   for n in range(spec.target_noise)]
        order = rng.permutation(len(target))
        unfiltered = TechCorpus(label="retrieved", records=tuple(target[i] for i in order))

    return SyntheticStudy(
        spec=spec,
        corpora=tuple(corpora),
        planted_counts=tuple(tuple(row) for row in ledger),
        labeled_pool=tuple(pool),
        unfiltered=unfiltered,
    )
