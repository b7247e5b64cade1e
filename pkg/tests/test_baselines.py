"""Tests for h-index, g-index, and degree centralities."""

import io

import numpy as np
import pytest

from techflow.baselines import (
    CentralityResult,
    CitationProfile,
    baselines_table,
    degree_centrality,
    g_index,
    h_index,
    profile_from_corpus,
    write_baselines,
)
from techflow.bundled import bundled_matrix
from techflow.errors import AllZeroMatrix
from techflow.graph import CrossCitationMatrix
from techflow.records import BiblioRecord, TechCorpus


def _profile(citations):
    return CitationProfile(label="T", citations=tuple(citations))


def _brute_h(citations):
    xs = sorted(citations, reverse=True)
    return max((i for i in range(1, len(xs) + 1) if xs[i - 1] >= i), default=0)


def _brute_g(citations):
    xs = sorted(citations, reverse=True)
    return max((i for i in range(1, len(xs) + 1) if sum(xs[:i]) >= i * i), default=0)


def test_h_index_examples():
    assert h_index(_profile([10, 8, 5, 4, 3])) == 4
    assert h_index(_profile([])) == 0
    assert h_index(_profile([0, 0, 0])) == 0


def test_g_index_examples():
    assert g_index(_profile([10, 8, 5, 4, 3])) == 5
    assert g_index(_profile([])) == 0
    assert g_index(_profile([2])) == 1


def test_profile_sorts_and_validates():
    profile = CitationProfile(label="T", citations=(1, 9, 4))
    assert profile.citations == (9, 4, 1)
    with pytest.raises(ValueError):
        CitationProfile(label="T", citations=(3, -1))


def test_indices_match_brute_force_on_random_profiles():
    rng = np.random.default_rng(404)
    for _ in range(500):
        n = int(rng.integers(0, 51))
        citations = [int(c) for c in rng.integers(0, 101, size=n)]
        profile = _profile(citations)
        assert h_index(profile) == _brute_h(citations)
        assert g_index(profile) == _brute_g(citations)
        assert g_index(profile) >= h_index(profile)
        assert h_index(profile) <= n and g_index(profile) <= n


def test_profile_from_corpus_uses_stored_citation_counts():
    corpus = TechCorpus(label="T", records=(
        BiblioRecord(doi="10.1/a", times_cited=7),
        BiblioRecord(doi="10.1/b", times_cited=2),
    ))
    assert profile_from_corpus(corpus).citations == (7, 2)


def test_degree_centrality_on_published_matrix():
    centrality = degree_centrality(bundled_matrix())
    by_in, by_out = centrality.as_mappings()
    assert by_in["5G"] == pytest.approx(18898 / 34245, abs=1e-12)
    assert by_in["5G"] == pytest.approx(0.5518, abs=1e-4)
    assert by_out["4G"] == pytest.approx(15227 / 34245, abs=1e-12)
    assert by_out["4G"] == pytest.approx(0.4446, abs=1e-4)
    assert sum(centrality.in_centrality) == pytest.approx(1.0, abs=1e-12)
    assert sum(centrality.out_centrality) == pytest.approx(1.0, abs=1e-12)


def test_degree_centrality_single_cell():
    matrix = CrossCitationMatrix(labels=("A", "B"), counts=((0, 5), (0, 0)))
    centrality = degree_centrality(matrix)
    assert centrality.in_centrality == (1.0, 0.0)
    assert centrality.out_centrality == (0.0, 1.0)


def test_degree_centrality_zero_matrix():
    matrix = CrossCitationMatrix(labels=("A", "B"), counts=((0, 0), (0, 0)))
    with pytest.raises(AllZeroMatrix):
        degree_centrality(matrix)


def test_degree_centrality_scale_invariant():
    rng = np.random.default_rng(11)
    counts = [[int(v) for v in row] for row in rng.integers(0, 50, size=(4, 4))]
    labels = tuple("ABCD")
    base = degree_centrality(CrossCitationMatrix(labels=labels, counts=counts))
    scaled_counts = [[7 * v for v in row] for row in counts]
    scaled = degree_centrality(CrossCitationMatrix(labels=labels, counts=scaled_counts))
    assert base.in_centrality == scaled.in_centrality
    assert base.out_centrality == scaled.out_centrality


def test_degree_centrality_with_intra_counts():
    matrix = CrossCitationMatrix(labels=("A", "B"), counts=((0, 4), (2, 0)))
    plain = degree_centrality(matrix)
    widened = degree_centrality(matrix, intra={"A": 4, "B": 0})
    assert plain.in_centrality == (4 / 6, 2 / 6)
    assert widened.in_centrality == (8 / 10, 2 / 10)
    assert widened.out_centrality == (6 / 10, 4 / 10)


def test_centrality_result_validation():
    with pytest.raises(ValueError):
        CentralityResult(labels=("A", "B"), in_centrality=(0.7, 0.7), out_centrality=(0.5, 0.5))
    with pytest.raises(ValueError):
        CentralityResult(labels=("A", "B"), in_centrality=(0.5,), out_centrality=(0.5, 0.5))


def test_baselines_table_and_csv(tmp_path):
    a = TechCorpus(label="A", records=(
        BiblioRecord(doi="10.1/a1", times_cited=10, cited_dois=("10.1/b1",)),
        BiblioRecord(doi="10.1/a2", times_cited=3),
    ))
    b = TechCorpus(label="B", records=(
        BiblioRecord(doi="10.1/b1", times_cited=1, cited_dois=("10.1/a1", "10.1/b2")),
        BiblioRecord(doi="10.1/b2", times_cited=0),
    ))
    matrix = CrossCitationMatrix(labels=("A", "B"), counts=((0, 1), (1, 0)))
    rows = baselines_table([a, b], matrix)
    assert [r["label"] for r in rows] == ["A", "B"]
    assert rows[0]["h_index"] == 2 and rows[0]["g_index"] == 2
    assert rows[1]["h_index"] == 1 and rows[1]["g_index"] == 1
    assert rows[0]["h_share"] == pytest.approx(2 / 3)
    path = tmp_path / "baselines.csv"
    write_baselines(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "label,h_index,g_index,in_centrality,out_centrality,h_share,g_share"
    assert len(lines) == 3

    widened = baselines_table([a, b], matrix, include_intra=True)
    # B cites its own b2 once, so B gains one unit on both degree sides
    assert widened[1]["in_centrality"] == pytest.approx(2 / 3)


def test_baselines_table_requires_all_corpora():
    a = TechCorpus(label="A", records=(BiblioRecord(doi="10.1/a1"),))
    matrix = CrossCitationMatrix(labels=("A", "B"), counts=((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        baselines_table([a], matrix)
