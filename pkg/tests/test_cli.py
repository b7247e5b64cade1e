"""End-to-end tests for the command-line pipeline."""

import json
from pathlib import Path

import pytest

from techflow import advancement, graph
from techflow.cli import main
from techflow.records import load_canonical

EXPORT = """\
FN Bibliographic Source
VR 1.0
PT J
TI Low latency scheduling for radio access
AB We study scheduling for the radio access network.
DT Article
PY 2019
DI 10.1000/alpha.1
CR Smith J, 2017, J NETW, V12, P1, DOI 10.1000/beta.2
TC 4
ER
PT C
TI Radio resource management survey
AB A survey of resource management techniques.
DT Proceedings Paper
PY 2020
DI 10.1000/alpha.3
CR Jones K, 2019, CONF PROC, DOI 10.1000/alpha.1
TC 1
ER
EF
"""


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def synth_dir(tmp_path):
    out = tmp_path / "study"
    assert run("synth", "--labels", "A,B,C", "--start-years", "2006,2009,2013",
               "--end-year", "2018", "--papers-per-year", "12",
               "--planted-order", "A,B,C", "--seed", "3", "--out-dir", out) == 0
    return out


def corpus_args(out: Path, labels=("A", "B", "C")):
    return [f"{label}={out / label}.jsonl" for label in labels]


class TestScore:
    def test_bundled_matrix_ranks_newest_generation_first(self, tmp_path, capsys):
        assert run("score", "--matrix", "bundled:table4", "--out-dir", tmp_path) == 0
        assert "ranking: 6G > 5G > 4G > 3G > 2G" in capsys.readouterr().out
        result = advancement.read_scores(tmp_path / "scores.csv")
        scores = result.as_mapping()
        assert scores["6G"] == pytest.approx(0.7905345850126444, abs=1e-12)
        assert scores["2G"] == pytest.approx(0.14780395153256617, abs=1e-12)

    def test_json_output_includes_ranking(self, tmp_path):
        assert run("score", "--matrix", "bundled:table4", "--out-dir", tmp_path,
                   "--json", "scores.json") == 0
        obj = json.loads((tmp_path / "scores.json").read_text("utf-8"))
        assert obj["ranking"][0] == ["6G"]
        assert obj["params"] == {"log_base": 2.0, "offset": 2.0}

    def test_single_technology_matrix_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "one.csv"
        bad.write_text(",A\nA,-\n", encoding="utf-8")
        assert run("score", "--matrix", bad) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "k >= 2 required" in err

    def test_matches_in_memory_computation(self, tmp_path, synth_dir):
        assert run("matrix", *corpus_args(synth_dir), "--out-dir", tmp_path) == 0
        assert run("score", "--matrix", tmp_path / "matrix.csv",
                   "--out-dir", tmp_path) == 0
        from_cli = advancement.read_scores(tmp_path / "scores.csv")
        corpora = [load_canonical(synth_dir / f"{label}.jsonl", label=label)
                   for label in ("A", "B", "C")]
        in_memory = advancement.advancement_index(graph.build_matrix(corpora))
        assert from_cli.labels == in_memory.labels
        assert from_cli.scores == pytest.approx(in_memory.scores, abs=1e-15)


class TestParse:
    def test_converts_export_to_canonical(self, tmp_path, capsys):
        export = tmp_path / "raw.txt"
        export.write_text(EXPORT, encoding="utf-8")
        assert run("parse", export, "--out-dir", tmp_path) == 0
        assert "parsed 2 records" in capsys.readouterr().out
        corpus = load_canonical(tmp_path / "raw.jsonl")
        assert [r.doi for r in corpus.records] == ["10.1000/alpha.1", "10.1000/alpha.3"]
        assert corpus.records[1].cited_dois == ("10.1000/alpha.1",)

    def test_malformed_export_exits_1(self, tmp_path, capsys):
        export = tmp_path / "raw.txt"
        export.write_text("PT J\nTI Unterminated record\n", encoding="utf-8")
        assert run("parse", export, "--out-dir", tmp_path) == 1
        assert capsys.readouterr().err.startswith("error:")


class TestSynth:
    def test_rebuilt_matrix_equals_planted_ledger(self, tmp_path, synth_dir):
        assert run("matrix", *corpus_args(synth_dir), "--out-dir", tmp_path) == 0
        built = (tmp_path / "matrix.csv").read_bytes()
        planted = (synth_dir / "planted_matrix.csv").read_bytes()
        assert built == planted

    def test_same_seed_is_byte_identical(self, tmp_path):
        outs = []
        for name in ("first", "second"):
            out = tmp_path / name
            assert run("synth", "--labels", "A,B", "--start-years", "2010,2012",
                       "--end-year", "2015", "--planted-order", "A,B",
                       "--seed", "9", "--out-dir", out) == 0
            outs.append(out)
        for filename in ("A.jsonl", "B.jsonl", "planted_matrix.csv"):
            assert (outs[0] / filename).read_bytes() == (outs[1] / filename).read_bytes()

    def test_missing_required_fields_exit_2(self, tmp_path, capsys):
        assert run("synth", "--labels", "A,B", "--out-dir", tmp_path) == 2
        assert "configuration error" in capsys.readouterr().err


class TestEvaluate:
    def test_planted_order_scores_perfectly(self, tmp_path, synth_dir, capsys):
        assert run("evaluate", *corpus_args(synth_dir), "--truth", "A,B,C",
                   "--out-dir", tmp_path) == 0
        report = (tmp_path / "evaluation.csv").read_text("utf-8").splitlines()
        assert report[0] == "method,overall_accuracy,mean_annual_accuracy"
        rows = dict(line.split(",", 1) for line in report[1:])
        assert rows["advancement"].startswith("1.0,")
        annual = (tmp_path / "annual.csv").read_text("utf-8").splitlines()
        assert annual[0] == "method,year,accuracy"
        assert len(annual) > 1

    def test_unknown_truth_label_exits_1(self, tmp_path, synth_dir, capsys):
        assert run("evaluate", *corpus_args(synth_dir), "--truth", "A,B,Z",
                   "--out-dir", tmp_path) == 1
        assert capsys.readouterr().err.startswith("error:")


class TestClassifierCommands:
    @pytest.fixture()
    def pool_dir(self, tmp_path):
        out = tmp_path / "pool"
        assert run("synth", "--labels", "A,B", "--start-years", "2008,2011",
                   "--end-year", "2016", "--planted-order", "A,B",
                   "--pool-relevant", "700", "--pool-irrelevant", "700",
                   "--target-relevant", "150", "--target-noise", "150",
                   "--seed", "5", "--out-dir", out) == 0
        return out

    def test_train_apply_stability(self, pool_dir, tmp_path, capsys):
        work = tmp_path / "work"
        assert run("filter-train", "--labeled", pool_dir / "pool.jsonl",
                   "--runs", "3", "--out-dir", work) == 0
        assert run("filter-apply", "--model", work / "model.json",
                   "--records", pool_dir / "retrieved.jsonl", "--out-dir", work) == 0
        out = capsys.readouterr().out
        assert "kept 150 of 300 records" in out
        assert run("stability", "--labeled", pool_dir / "pool.jsonl",
                   "--target", pool_dir / "retrieved.jsonl",
                   "--max-n", "500", "--out-dir", work) == 0
        out = capsys.readouterr().out
        assert "stable from n=" in out
        lines = (work / "stability.csv").read_text("utf-8").splitlines()
        assert lines[0] == "n,relevant_count,stability"
        assert lines[1].startswith("100,") and lines[1].endswith(",")
        assert len(lines) == 6

    def test_retrain_final_model(self, pool_dir, tmp_path):
        work = tmp_path / "work"
        assert run("filter-train", "--labeled", pool_dir / "pool.jsonl",
                   "--runs", "2", "--final-model", "retrain", "--out-dir", work) == 0
        assert (work / "model.json").exists()


class TestReport:
    def test_bundles_outputs_and_figures(self, tmp_path, synth_dir):
        work = tmp_path / "work"
        assert run("matrix", *corpus_args(synth_dir), "--out-dir", work) == 0
        assert run("score", "--matrix", work / "matrix.csv", "--out-dir", work) == 0
        assert run("timeseries", *corpus_args(synth_dir), "--out-dir", work) == 0
        assert run("evaluate", *corpus_args(synth_dir), "--truth", "A,B,C",
                   "--out-dir", work) == 0
        assert run("report", "--matrix", work / "matrix.csv",
                   "--scores", work / "scores.csv", "--series", work / "series.csv",
                   "--volumes", work / "volumes.csv",
                   "--evaluation", work / "evaluation.csv", "--out-dir", work) == 0
        obj = json.loads((work / "report.json").read_text("utf-8"))
        assert obj["technologies"] == ["A", "B", "C"]
        assert obj["ranking"][0] == ["C"]
        assert obj["accuracy"]["advancement"]["overall_accuracy"] == 1.0
        assert obj["citation_flow"]["total"] == sum(obj["citation_flow"]["in_degrees"].values())
        for figure in obj["figures"]:
            assert (work / figure).stat().st_size > 0
        assert "scores.png" in obj["figures"]
        assert "accuracy.png" in obj["figures"]

    def test_without_inputs_exits_2(self, tmp_path, capsys):
        assert run("report", "--out-dir", tmp_path) == 2
        assert "configuration error" in capsys.readouterr().err


class TestConfigAndEnvironment:
    def test_out_dir_env_variable(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TECHFLOW_OUT", str(tmp_path / "from_env"))
        assert run("score", "--matrix", "bundled:table4") == 0
        assert (tmp_path / "from_env" / "scores.csv").exists()

    def test_config_supplies_flags(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"matrix": "bundled:table4", "log_base": 10.0}),
                          encoding="utf-8")
        assert run("score", "--config", config, "--out-dir", tmp_path) == 0
        result = advancement.read_scores(tmp_path / "scores.csv")
        assert result.params.log_base == 10.0

    def test_flags_override_config(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"matrix": "bundled:table4", "log_base": 10.0}),
                          encoding="utf-8")
        assert run("score", "--config", config, "-a", "2", "--out-dir", tmp_path) == 0
        result = advancement.read_scores(tmp_path / "scores.csv")
        assert result.params.log_base == 2.0

    def test_bad_config_json_exits_2(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text("not json", encoding="utf-8")
        assert run("score", "--config", config, "--matrix", "bundled:table4",
                   "--out-dir", tmp_path) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_bad_corpus_argument_exits_2(self, tmp_path, capsys):
        assert run("matrix", "no-equals-sign", "--out-dir", tmp_path) == 2
        assert "LABEL=FILE" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert run("score", "--matrix", tmp_path / "absent.csv") == 2
        assert "configuration error" in capsys.readouterr().err
