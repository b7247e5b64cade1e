"""Comparison indices: h-index, g-index, and degree centralities.

These are the standard bibliometric yardsticks the advancement score is
evaluated against. h and g work on per-paper citation counts; the degree
centralities normalize the matrix row/column sums so each vector sums to 1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping, Sequence

from .errors import AllZeroMatrix
from .graph import CrossCitationMatrix, in_degree, intra_citations, out_degree
from .records import TechCorpus


@dataclass(frozen=True)
class CitationProfile:
    """Per-paper citation counts for one technology, held sorted descending."""

    label: str
    citations: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.citations):
            raise ValueError("citation counts must be non-negative")
        object.__setattr__(self, "citations", tuple(sorted(self.citations, reverse=True)))


def profile_from_corpus(corpus: TechCorpus) -> CitationProfile:
    return CitationProfile(label=corpus.label,
                           citations=tuple(r.times_cited for r in corpus.records))


def h_index(profile: CitationProfile) -> int:
    """Largest h such that h papers have at least h citations each."""
    h = 0
    for i, c in enumerate(profile.citations, 1):
        if c >= i:
            h = i
        else:
            break
    return h


def g_index(profile: CitationProfile) -> int:
    """Largest g (at most the paper count) whose top g papers total >= g^2 citations."""
    g = 0
    cumulative = 0
    for i, c in enumerate(profile.citations, 1):
        cumulative += c
        if cumulative >= i * i:
            g = i
    return g


@dataclass(frozen=True)
class CentralityResult:
    labels: tuple[str, ...]
    in_centrality: tuple[float, ...]
    out_centrality: tuple[float, ...]

    def __post_init__(self):
        for vector in (self.in_centrality, self.out_centrality):
            if len(vector) != len(self.labels):
                raise ValueError("centrality vectors must match the label count")
            if any(v < 0 for v in vector):
                raise ValueError("centralities must be non-negative")
            if abs(sum(vector) - 1.0) > 1e-12:
                raise ValueError("each centrality vector must sum to 1")

    def as_mappings(self) -> tuple[dict[str, float], dict[str, float]]:
        return (dict(zip(self.labels, self.in_centrality)),
                dict(zip(self.labels, self.out_centrality)))


def degree_centrality(matrix: CrossCitationMatrix,
                      intra: Mapping[str, int] | None = None) -> CentralityResult:
    """Share of total citation flow each technology sends (in) and receives (out).

    intra optionally adds within-technology citation counts per label to both
    the sending and receiving side of that technology, widening the network
    to include internal flows.
    """
    ins = [in_degree(matrix, i) for i in range(matrix.k)]
    outs = [out_degree(matrix, i) for i in range(matrix.k)]
    if intra:
        for i, label in enumerate(matrix.labels):
            extra = int(intra.get(label, 0))
            ins[i] += extra
            outs[i] += extra
    total_in, total_out = sum(ins), sum(outs)
    if total_in == 0 or total_out == 0:
        raise AllZeroMatrix("degree centrality needs at least one citation in the network")
    return CentralityResult(
        labels=matrix.labels,
        in_centrality=tuple(v / total_in for v in ins),
        out_centrality=tuple(v / total_out for v in outs),
    )


def intra_counts(corpora: Sequence[TechCorpus], multiset: bool = False) -> dict[str, int]:
    return {c.label: intra_citations(c, multiset) for c in corpora}


def baselines_table(corpora: Sequence[TechCorpus], matrix: CrossCitationMatrix,
                    include_intra: bool = False) -> list[dict[str, object]]:
    """One row per technology: h, g, both centralities, and the h/g shares
    of their totals (the percentage normalization used for comparison plots)."""
    by_label = {c.label: c for c in corpora}
    missing = [label for label in matrix.labels if label not in by_label]
    if missing:
        raise ValueError(f"no corpus provided for matrix label(s): {', '.join(missing)}")
    intra = intra_counts([by_label[label] for label in matrix.labels]) if include_intra else None
    centrality = degree_centrality(matrix, intra=intra)
    h_values = {}
    g_values = {}
    for label in matrix.labels:
        profile = profile_from_corpus(by_label[label])
        h_values[label] = h_index(profile)
        g_values[label] = g_index(profile)
    h_total = sum(h_values.values())
    g_total = sum(g_values.values())
    rows = []
    for i, label in enumerate(matrix.labels):
        rows.append({
            "label": label,
            "h_index": h_values[label],
            "g_index": g_values[label],
            "in_centrality": centrality.in_centrality[i],
            "out_centrality": centrality.out_centrality[i],
            "h_share": h_values[label] / h_total if h_total else 0.0,
            "g_share": g_values[label] / g_total if g_total else 0.0,
        })
    return rows


def write_baselines(rows: Sequence[Mapping[str, object]], dest: str | Path | IO[str]) -> None:
    columns = ["label", "h_index", "g_index", "in_centrality", "out_centrality",
               "h_share", "g_share"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row["label"]] + [repr(row[c]) if isinstance(row[c], float) else row[c]
                                          for c in columns[1:]])
    text = buffer.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)
