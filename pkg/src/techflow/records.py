"""Field-tagged bibliographic exports and the canonical newline-JSON record format.

Export files are plain UTF-8 text: each record is a block of lines whose
first two characters are a field tag (PT, TI, AB, DI, CR, PY, TC, DT, ...),
continuation lines are indented, the record ends with "ER" and the file
with "EF". Cited references are matched by DOI only, so every CR line is
scanned for a "DOI <id>" token.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import DuplicateDoi, EncodingError, MalformedRecord, SchemaError

Source = Union[str, Path, IO[bytes], IO[str]]

DOC_TYPES = ("article", "proceedings", "review", "early-access")

_RESOLVER_RE = re.compile(r"^https?://(?:dx\.)?doi\.org/")
_DOI_PREFIX_RE = re.compile(r"^doi[:\s]*")
_TAG_RE = re.compile(r"^([A-Z0-9][A-Z0-9])(?: (.*))?$")
_CR_DOI_RE = re.compile(r"\bDOI\s+\[?([^\s,;\]]+)", re.IGNORECASE)


def normalize_doi(raw: str | None) -> str | None:
    """Canonicalize a DOI fragment; None when no "10."-prefixed identifier remains."""
    if not raw:
        return None
    s = raw.strip().lower()
    # resolver URLs and a leading "doi" token may stack ("DOI https://doi.org/10...")
    while True:
        stripped = _DOI_PREFIX_RE.sub("", _RESOLVER_RE.sub("", s)).strip()
        if stripped == s:
            break
        s = stripped
    s = s.split()[0] if s.split() else ""
    if not s.startswith("10."):
        return None
    return s


@dataclass(frozen=True)
class BiblioRecord:
    """One parsed publication. Construction normalizes the identifier fields:
    the doi is canonicalized, cited_dois is deduplicated and never contains
    the record's own doi, and pub_year outside [1900, 2100] is dropped.
    """

    doi: str | None = None
    title: str = ""
    abstract: str = ""
    pub_year: int | None = None
    times_cited: int = 0
    cited_dois: tuple[str, ...] = ()
    doc_type: str = "article"

    def __post_init__(self):
        doi = normalize_doi(self.doi)
        object.__setattr__(self, "doi", doi)
        year = self.pub_year
        if year is not None and not 1900 <= year <= 2100:
            year = None
        object.__setattr__(self, "pub_year", year)
        object.__setattr__(self, "times_cited", max(0, int(self.times_cited)))
        seen: dict[str, None] = {}
        for raw in self.cited_dois:
            d = normalize_doi(raw)
            if d and d != doi:
                seen.setdefault(d)
        object.__setattr__(self, "cited_dois", tuple(seen))
        if self.doc_type not in DOC_TYPES:
            object.__setattr__(self, "doc_type", classify_doc_type(self.doc_type))


@dataclass(frozen=True)
class TechCorpus:
    """A labeled technology and its record set."""

    label: str
    records: tuple[BiblioRecord, ...]
    query_terms: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.label:
            raise ValueError("corpus label must be non-empty")
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "query_terms", tuple(self.query_terms))
        seen: set[str] = set()
        for r in self.records:
            if r.doi is None:
                continue
            if r.doi in seen:
                raise DuplicateDoi(f"corpus {self.label!r}: duplicate doi {r.doi}")
            seen.add(r.doi)

    def doi_set(self) -> set[str]:
        return {r.doi for r in self.records if r.doi}


def classify_doc_type(dt: str) -> str:
    """Map a raw document-type field to the artifact's enumeration."""
    low = dt.lower()
    if "proceeding" in low:
        return "proceedings"
    if "review" in low:
        return "review"
    if "early access" in low or "early-access" in low:
        return "early-access"
    return "article"


_DT_EXPORT = {
    "article": "Article",
    "proceedings": "Proceedings Paper",
    "review": "Review",
    "early-access": "Early Access",
}


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"input is not valid UTF-8: {exc}") from exc
    return data.lstrip("\ufeff")


def parse_export(source: Source) -> list[BiblioRecord]:
    """Parse a field-tagged export into records.

    Records open at a "PT " tag and close at "ER"; anything outside a record
    (the FN/VR header, blank separators) is ignored. Raises MalformedRecord
    when a record is still open at "EF" or end of input.
    """
    text = _read_text(source)
    records: list[BiblioRecord] = []
    fields: dict[str, list[str]] | None = None
    tag: str | None = None
    for line in text.splitlines():
        line = line.rstrip()
        if fields is None:
            if line.startswith("PT "):
                fields = {"PT": [line[3:]]}
                tag = "PT"
            continue
        if line == "ER":
            records.append(_finalize(fields))
            fields, tag = None, None
            continue
        if line == "EF":
            raise MalformedRecord("record block not terminated by ER before EF")
        if not line:
            continue
        m = _TAG_RE.match(line)
        if m and not line.startswith(" "):
            tag = m.group(1)
            fields.setdefault(tag, []).append(m.group(2) or "")
        elif tag is not None:
            fields.setdefault(tag, []).append(line.strip())
    if fields is not None:
        raise MalformedRecord("record block not terminated by ER at end of input")
    return _collapse_duplicates(records)


def _finalize(fields: dict[str, list[str]]) -> BiblioRecord:
    def joined(tag: str) -> str:
        return " ".join(fields.get(tag, [])).strip()

    cited = []
    for line in fields.get("CR", []):
        for token in _CR_DOI_RE.findall(line):
            cited.append(token.strip("[],;"))
    return BiblioRecord(
        doi=joined("DI") or None,
        title=joined("TI"),
        abstract=joined("AB"),
        pub_year=_int_or_none(joined("PY")),
        times_cited=_int_or_none(joined("TC")) or 0,
        cited_dois=tuple(cited),
        doc_type=classify_doc_type(joined("DT")),
    )


def _int_or_none(text: str) -> int | None:
    try:
        return int(text)
    except ValueError:
        return None


def _collapse_duplicates(records: list[BiblioRecord]) -> list[BiblioRecord]:
    # same-doi duplicates within one export keep the first occurrence
    seen: set[str] = set()
    out = []
    for r in records:
        if r.doi is not None:
            if r.doi in seen:
                continue
            seen.add(r.doi)
        out.append(r)
    return out


def write_export(records: Iterable[BiblioRecord], dest: str | Path | IO[str]) -> None:
    """Emit records in the field-tagged export format (round-trips through parse_export)."""
    lines = ["FN techflow export", "VR 1.0", ""]
    for r in records:
        lines.append("PT J")
        if r.title:
            lines.append(f"TI {r.title}")
        if r.abstract:
            lines.append(f"AB {r.abstract}")
        lines.append(f"DT {_DT_EXPORT[r.doc_type]}")
        for i, d in enumerate(r.cited_dois):
            prefix = "CR " if i == 0 else "   "
            lines.append(f"{prefix}Anon, {r.pub_year or ''}, CITED SRC, DOI {d}")
        if r.pub_year is not None:
            lines.append(f"PY {r.pub_year}")
        lines.append(f"TC {r.times_cited}")
        if r.doi:
            lines.append(f"DI {r.doi}")
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    _write_text(dest, "\n".join(lines) + "\n")


# --- canonical newline-delimited JSON format ---

_CANONICAL_KEYS = ("doi", "title", "abstract", "pub_year", "times_cited", "cited_dois", "doc_type")


def record_to_dict(r: BiblioRecord) -> dict:
    return {
        "doi": r.doi,
        "title": r.title,
        "abstract": r.abstract,
        "pub_year": r.pub_year,
        "times_cited": r.times_cited,
        "cited_dois": list(r.cited_dois),
        "doc_type": r.doc_type,
    }


def record_from_dict(obj: dict, where: str = "record") -> BiblioRecord:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected a JSON object")
    missing = [k for k in _CANONICAL_KEYS if k not in obj]
    if missing:
        raise SchemaError(f"{where}: missing required field(s) {', '.join(missing)}")
    doi = obj["doi"]
    if doi is not None and not isinstance(doi, str):
        raise SchemaError(f"{where}: doi must be a string or null")
    year = obj["pub_year"]
    if year is not None and not isinstance(year, int):
        raise SchemaError(f"{where}: pub_year must be an integer or null")
    if not isinstance(obj["times_cited"], int) or obj["times_cited"] < 0:
        raise SchemaError(f"{where}: times_cited must be a non-negative integer")
    if not isinstance(obj["cited_dois"], list):
        raise SchemaError(f"{where}: cited_dois must be a list")
    return BiblioRecord(
        doi=doi,
        title=str(obj["title"] or ""),
        abstract=str(obj["abstract"] or ""),
        pub_year=year,
        times_cited=obj["times_cited"],
        cited_dois=tuple(obj["cited_dois"]),
        doc_type=str(obj["doc_type"] or "article"),
    )


def save_canonical(records: Iterable[BiblioRecord], dest: str | Path | IO[str]) -> None:
    lines = [json.dumps(record_to_dict(r), ensure_ascii=False, separators=(",", ":")) for r in records]
    _write_text(dest, "".join(line + "\n" for line in lines))


def load_canonical(source: Source, label: str | None = None,
                   query_terms: Iterable[str] = ()) -> TechCorpus:
    """Load a canonical record file into a corpus.

    The label defaults to the file stem when loading from a path. Raises
    SchemaError on missing/ill-typed fields and DuplicateDoi when two
    records share an identifier.
    """
    if label is None:
        label = Path(source).stem if isinstance(source, (str, Path)) else "corpus"
    text = _read_text(source)
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {lineno}: invalid JSON: {exc}") from exc
        records.append(record_from_dict(obj, where=f"line {lineno}"))
    return TechCorpus(label=label, records=tuple(records), query_terms=tuple(query_terms))


def _write_text(dest: str | Path | IO[str], text: str) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="\n")
    else:
        dest.write(text)
