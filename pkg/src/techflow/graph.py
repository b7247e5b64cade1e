"""Cross-citation counting between technology corpora.

The matrix cell counts[i][j] is the number of citations from technology i's
papers to technology j's papers, matched by DOI. Each (citing paper, cited
DOI) pair counts once; self-citations and within-technology citations stay
out of the matrix (the diagonal is undefined and written as "-" in CSV).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence, Union

from .errors import IndexOutOfRange, SameLabel, SchemaError, TooFewTechnologies
from .records import TechCorpus

Source = Union[str, Path, IO[str], IO[bytes]]


@dataclass(frozen=True)
class CrossCitationMatrix:
    """k x k citation counts between labeled technologies; diagonal never read."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", tuple(tuple(int(c) for c in row) for row in self.counts))
        k = len(self.labels)
        if k < 2:
            raise TooFewTechnologies(f"matrix has {k} technology; k >= 2 required")
        if len(set(self.labels)) != k:
            raise SameLabel("technology labels must be distinct")
        if len(self.counts) != k or any(len(row) != k for row in self.counts):
            raise ValueError(f"counts must be a {k}x{k} table")
        for i, row in enumerate(self.counts):
            for j, c in enumerate(row):
                if i != j and c < 0:
                    raise ValueError(f"negative count at ({self.labels[i]}, {self.labels[j]})")

    @property
    def k(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise IndexOutOfRange(f"unknown technology label {label!r}") from None

    def cell(self, i: int, j: int) -> int:
        _check_index(self, i)
        _check_index(self, j)
        return self.counts[i][j]


def _check_index(matrix: CrossCitationMatrix, i: int) -> None:
    if not 0 <= i < matrix.k:
        raise IndexOutOfRange(f"index {i} outside [0, {matrix.k})")


def _matched_references(citing: TechCorpus, cited_dois: set[str], multiset: bool) -> int:
    # a record never stores its own doi among its references, so no extra
    # self-pair guard is needed, even within one corpus
    count = 0
    for record in citing.records:
        refs = record.cited_dois if multiset else set(record.cited_dois)
        count += sum(1 for doi in refs if doi in cited_dois)
    return count


def cross_citations(citing: TechCorpus, cited: TechCorpus, multiset: bool = False) -> int:
    """Citations from the citing corpus into the cited corpus, one per (paper, DOI) pair.

    multiset=True counts every stored reference occurrence instead; records
    deduplicate their references at construction, so the modes agree for any
    corpus built through this package.
    """
    if citing.label == cited.label:
        raise SameLabel(f"citing and cited corpus share the label {citing.label!r}")
    return _matched_references(citing, cited.doi_set(), multiset)


def intra_citations(corpus: TechCorpus, multiset: bool = False) -> int:
    """Citations from a corpus into itself (kept off the matrix; used by the
    centrality option that widens degrees to within-technology flows)."""
    return _matched_references(corpus, corpus.doi_set(), multiset)


def build_matrix(corpora: Sequence[TechCorpus], multiset: bool = False) -> CrossCitationMatrix:
    """Assemble the full cross-citation matrix over two or more corpora."""
    if len(corpora) < 2:
        raise TooFewTechnologies(f"matrix has {len(corpora)} technology; k >= 2 required")
    labels = [c.label for c in corpora]
    if len(set(labels)) != len(labels):
        raise SameLabel("corpora must carry distinct labels")
    owners: dict[str, list[int]] = {}
    for j, corpus in enumerate(corpora):
        for doi in corpus.doi_set():
            owners.setdefault(doi, []).append(j)
    counts = [[0] * len(corpora) for _ in corpora]
    for i, corpus in enumerate(corpora):
        for record in corpus.records:
            refs = record.cited_dois if multiset else set(record.cited_dois)
            for doi in refs:
                for j in owners.get(doi, ()):
                    if j != i:
                        counts[i][j] += 1
    return CrossCitationMatrix(labels=tuple(labels), counts=tuple(tuple(row) for row in counts))


def in_degree(matrix: CrossCitationMatrix, i: int) -> int:
    """Row sum without the diagonal: how much technology i draws on the others."""
    _check_index(matrix, i)
    return sum(c for j, c in enumerate(matrix.counts[i]) if j != i)


def out_degree(matrix: CrossCitationMatrix, i: int) -> int:
    """Column sum without the diagonal: how much the others draw on technology i."""
    _check_index(matrix, i)
    return sum(row[i] for j, row in enumerate(matrix.counts) if j != i)


@dataclass(frozen=True)
class DegreeSummary:
    labels: tuple[str, ...]
    in_degrees: tuple[int, ...]
    out_degrees: tuple[int, ...]

    def __post_init__(self):
        if sum(self.in_degrees) != sum(self.out_degrees):
            raise ValueError("in- and out-degree totals must agree")

    @property
    def total(self) -> int:
        return sum(self.in_degrees)


def degree_summary(matrix: CrossCitationMatrix) -> DegreeSummary:
    return DegreeSummary(
        labels=matrix.labels,
        in_degrees=tuple(in_degree(matrix, i) for i in range(matrix.k)),
        out_degrees=tuple(out_degree(matrix, i) for i in range(matrix.k)),
    )


# --- matrix CSV, mirroring the diagonal "-" layout ---

def write_matrix(matrix: CrossCitationMatrix, dest: str | Path | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + list(matrix.labels))
    for i, label in enumerate(matrix.labels):
        row = [label] + ["-" if i == j else str(matrix.counts[i][j]) for j in range(matrix.k)]
        writer.writerow(row)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(buffer.getvalue(), encoding="utf-8", newline="\n")
    else:
        dest.write(buffer.getvalue())


def read_matrix(source: Source) -> CrossCitationMatrix:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text("utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise SchemaError("matrix file is empty")
    labels = tuple(cell.strip() for cell in rows[0][1:])
    if len(rows) - 1 != len(labels):
        raise SchemaError(f"matrix file has {len(labels)} columns but {len(rows) - 1} rows")
    counts = []
    for i, row in enumerate(rows[1:]):
        if len(row) != len(labels) + 1:
            raise SchemaError(f"row {i + 2}: expected {len(labels) + 1} cells, got {len(row)}")
        if row[0].strip() != labels[i]:
            raise SchemaError(f"row {i + 2}: label {row[0]!r} does not match column order")
        parsed = []
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            if i == j:
                parsed.append(0)
                continue
            try:
                parsed.append(int(cell))
            except ValueError:
                raise SchemaError(f"row {i + 2}: non-integer count {cell!r}") from None
        counts.append(tuple(parsed))
    return CrossCitationMatrix(labels=labels, counts=tuple(counts))
