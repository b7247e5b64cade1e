"""Tests for the synthetic study generator and its planted-edge ledger."""

import io

import pytest

from techflow.advancement import Dominance, advancement_index, pairwise_dominance, rank
from techflow.errors import InvalidSpec
from techflow.filtering import train
from techflow.graph import build_matrix, intra_citations
from techflow.records import save_canonical
from techflow.synthetic import SyntheticSpec, generate


def _spec(**overrides):
    base = dict(
        labels=("A", "B", "C"),
        start_years=(2006, 2008, 2012),
        end_year=2016,
        papers_per_year=8,
        seed=7,
    )
    base.update(overrides)
    return SyntheticSpec(**base)


def test_build_matrix_equals_planted_ledger():
    study = generate(_spec())
    matrix = build_matrix(study.corpora)
    assert matrix.counts == study.planted_cross_counts()


def test_intra_citations_equal_ledger_diagonal():
    rate = ((1.0, 0.5, 0.0), (0.5, 1.5, 0.0), (2.0, 2.0, 0.5))
    study = generate(_spec(cite_rate=rate))
    for i, corpus in enumerate(study.corpora):
        assert intra_citations(corpus) == study.planted_counts[i][i]
    matrix = build_matrix(study.corpora)
    assert matrix.counts == study.planted_cross_counts()


def test_zero_rates_give_zero_matrix():
    rate = ((0.0,) * 3,) * 3
    study = generate(_spec(cite_rate=rate))
    matrix = build_matrix(study.corpora)
    assert all(c == 0 for row in matrix.counts for c in row)


def test_planted_dominance_direction():
    rate = ((0.0, 3.0), (0.1, 0.0))
    spec = SyntheticSpec(labels=("X", "Y"), start_years=(2005, 2005), end_year=2015,
                         papers_per_year=10, cite_rate=rate, seed=3)
    study = generate(spec)
    matrix = build_matrix(study.corpora)
    assert pairwise_dominance(matrix, 0, 1) is Dominance.FIRST_MORE_ADVANCED


def test_planted_order_is_recovered_at_full_period():
    spec = _spec(planted_order=("A", "B", "C"), cite_base=0.3, cite_boost=4.0,
                 papers_per_year=12)
    study = generate(spec)
    result = advancement_index(build_matrix(study.corpora))
    assert [g[0] for g in rank(result)] == ["C", "B", "A"]


def test_same_seed_reproduces_byte_identical_corpora():
    a = generate(_spec(pool_relevant=30, pool_irrelevant=30, target_relevant=20, target_noise=20))
    b = generate(_spec(pool_relevant=30, pool_irrelevant=30, target_relevant=20, target_noise=20))
    assert a == b
    buf_a, buf_b = io.StringIO(), io.StringIO()
    save_canonical(a.corpora[0].records, buf_a)
    save_canonical(b.corpora[0].records, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()


def test_different_seeds_differ():
    assert generate(_spec(seed=1)) != generate(_spec(seed=2))


def test_citing_papers_never_cite_the_future():
    study = generate(_spec())
    by_doi = {r.doi: r for corpus in study.corpora for r in corpus.records}
    for corpus in study.corpora:
        for record in corpus.records:
            for doi in record.cited_dois:
                assert by_doi[doi].pub_year <= record.pub_year


def test_labeled_pool_is_separable():
    study = generate(_spec(pool_relevant=120, pool_irrelevant=120))
    assert len(study.labeled_pool) == 240
    _, accuracy = train(study.labeled_pool, seed=1)
    assert accuracy >= 0.95


def test_unfiltered_target_mixes_classes():
    study = generate(_spec(target_relevant=25, target_noise=15))
    assert study.unfiltered is not None
    assert len(study.unfiltered.records) == 40
    assert generate(_spec()).unfiltered is None


def test_citedness_controls_stored_citation_counts():
    study = generate(_spec(citedness=(40.0, 1.0, 1.0), papers_per_year=20))
    means = [sum(r.times_cited for r in c.records) / len(c.records) for c in study.corpora]
    assert means[0] > 5 * means[1]


def test_invalid_specs():
    with pytest.raises(InvalidSpec):
        _spec(labels=("A",), start_years=(2006,))
    with pytest.raises(InvalidSpec):
        _spec(labels=("A", "A", "C"))
    with pytest.raises(InvalidSpec):
        _spec(start_years=(2006, 2008))
    with pytest.raises(InvalidSpec):
        _spec(start_years=(2006, 2008, 2020))
    with pytest.raises(InvalidSpec):
        _spec(papers_per_year=0)
    with pytest.raises(InvalidSpec):
        _spec(cite_rate=((0.0, 1.0), (1.0, 0.0)))
    with pytest.raises(InvalidSpec):
        _spec(cite_rate=(((-1.0,) * 3,) * 3))
    with pytest.raises(InvalidSpec):
        _spec(planted_order=("A", "B"))
    with pytest.raises(InvalidSpec):
        _spec(citedness=(1.0,))
    with pytest.raises(InvalidSpec):
        _spec(pool_relevant=-1)
