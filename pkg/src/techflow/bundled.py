"""Access to the data files shipped inside the package.

Two mobile-communication fixtures are bundled so the pipeline can be
exercised without any external corpus: a 5x5 cross-citation matrix over the
generations 2G through 6G and the matching per-technology retrieval volumes.
CLI paths of the form "bundled:<name>" resolve here.
"""

from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

from .errors import SchemaError
from .graph import CrossCitationMatrix, read_matrix

FIXTURES = {
    "table4": "table4_matrix.csv",
    "table2": "table2_volumes.csv",
    "stopwords": "stopwords.txt",
}

_PREFIX = "bundled:"


def fixture_path(name: str) -> Path:
    try:
        filename = FIXTURES[name]
    except KeyError:
        known = ", ".join(sorted(FIXTURES))
        raise SchemaError(f"unknown bundled fixture {name!r} (known: {known})") from None
    with resources.as_file(resources.files("techflow").joinpath(f"data/{filename}")) as path:
        return Path(path)


def resolve_input(path: str) -> Path:
    """Map "bundled:<name>" to the shipped file; pass ordinary paths through."""
    if path.startswith(_PREFIX):
        return fixture_path(path[len(_PREFIX):])
    return Path(path)


def bundled_matrix() -> CrossCitationMatrix:
    """The bundled 5-technology cross-citation matrix (2G through 6G)."""
    return read_matrix(fixture_path("table4"))


def bundled_volumes() -> dict[str, int]:
    """Initial retrieval volume per technology for the bundled study."""
    volumes: dict[str, int] = {}
    with open(fixture_path("table2"), newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            volumes[row["technology"]] = int(row["volume"])
    return volumes
