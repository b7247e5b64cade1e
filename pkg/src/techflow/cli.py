"""Command-line pipeline: parse -> filter -> matrix -> score -> evaluate -> report.

Every stage reads and writes plain files (CSV/JSON/JSONL), so the pipeline
can be resumed at any point. Randomized stages take an explicit --seed and
default to 0; identical inputs and seed give byte-identical outputs. Paths
of the form "bundled:<name>" refer to the data files shipped with the
package. The default output directory comes from $TECHFLOW_OUT.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import advancement, baselines, evaluation, filtering, graph, plots, timeseries
from .advancement import ModelParams
from .bundled import resolve_input
from .errors import TechflowError
from .records import TechCorpus, load_canonical, parse_export, save_canonical
from .synthetic import SyntheticSpec, generate

DEFAULT_SEED = 0


class ConfigError(Exception):
    """Bad flags, files, or config values (exit code 2)."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="techflow",
        description="Assess relative technology advancement from cross-citations "
                    "in bibliographic records.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text, handler):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", metavar="FILE",
                       help="JSON file with defaults for any flag (flags win)")
        p.add_argument("--out-dir", metavar="DIR",
                       help="output directory (default: $TECHFLOW_OUT or .)")
        return p

    p = add("parse", "convert a field-tagged export file to canonical records", _cmd_parse)
    p.add_argument("input", help="export file path")
    p.add_argument("-o", "--output", help="canonical output file (default: <input stem>.jsonl)")

    p = add("filter-train", "train the relevance classifier on labeled records", _cmd_filter_train)
    p.add_argument("--labeled", help="labeled canonical records (label key 0/1)")
    p.add_argument("--penalty", type=float, help="soft-margin penalty (default 1.0)")
    p.add_argument("--split", type=float, help="holdout fraction (default 0.2)")
    p.add_argument("--seed", type=int, help=f"base RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--runs", type=int, help="number of randomized experiments (default 10)")
    p.add_argument("--final-model", choices=("best", "retrain"),
                   help="deploy the best holdout run or retrain on all labels (default best)")
    p.add_argument("-o", "--output", help="model file (default model.json)")

    p = add("filter-apply", "keep the records the model classifies as relevant", _cmd_filter_apply)
    p.add_argument("--model", help="trained model JSON")
    p.add_argument("--records", help="canonical records to filter")
    p.add_argument("-o", "--output", help="filtered output (default filtered.jsonl)")

    p = add("stability", "classification stability versus training sample size", _cmd_stability)
    p.add_argument("--labeled", help="labeled canonical records")
    p.add_argument("--target", help="canonical records to classify at each size")
    p.add_argument("--max-n", type=int, help="largest sample size (default 1000)")
    p.add_argument("--seed", type=int, help=f"base RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--split", type=float, help="holdout fraction (default 0.2)")
    p.add_argument("--penalty", type=float, help="soft-margin penalty (default 1.0)")
    p.add_argument("--threshold", type=float, help="plateau threshold (default 0.01)")
    p.add_argument("-o", "--output", help="curve CSV (default stability.csv)")

    p = add("matrix", "cross-citation matrix over technology corpora", _cmd_matrix)
    p.add_argument("corpora", nargs="*", metavar="LABEL=FILE",
                   help="labeled canonical record files")
    p.add_argument("--multiset", action="store_true", default=None,
                   help="count repeated references instead of distinct ones")
    p.add_argument("-o", "--output", help="matrix CSV (default matrix.csv)")

    p = add("score", "advancement scores from a cross-citation matrix", _cmd_score)
    p.add_argument("--matrix", help="matrix CSV (e.g. bundled:table4)")
    p.add_argument("-a", "--log-base", type=float, help="weight logarithm base (default 2)")
    p.add_argument("-b", "--offset", type=float, help="weight additive offset (default 2)")
    p.add_argument("-o", "--output", help="score CSV (default scores.csv)")
    p.add_argument("--json", dest="json_output", help="also write scores + ranking as JSON")

    p = add("baselines", "h-index, g-index, and degree centralities", _cmd_baselines)
    p.add_argument("corpora", nargs="*", metavar="LABEL=FILE")
    p.add_argument("--include-intra", action="store_true", default=None,
                   help="count within-technology citations in the degrees")
    p.add_argument("--multiset", action="store_true", default=None)
    p.add_argument("-o", "--output", help="baseline CSV (default baselines.csv)")

    p = add("timeseries", "year-by-year scores over cumulative slices", _cmd_timeseries)
    p.add_argument("corpora", nargs="*", metavar="LABEL=FILE")
    _add_series_flags(p)
    p.add_argument("-o", "--output", help="long-form series CSV (default series.csv)")
    p.add_argument("--volumes", help="yearly volume CSV (default volumes.csv)")

    p = add("evaluate", "ranking accuracy of every method against a truth order", _cmd_evaluate)
    p.add_argument("corpora", nargs="*", metavar="LABEL=FILE")
    p.add_argument("--truth", help="labels least to most advanced, comma-separated")
    p.add_argument("--metric", choices=evaluation.METRICS,
                   help="pairwise concordance or top-1 (default pairwise)")
    _add_series_flags(p)
    p.add_argument("-o", "--output", help="report CSV (default evaluation.csv)")
    p.add_argument("--annual", help="per-year accuracy CSV (default annual.csv)")

    p = add("synth", "generate a synthetic study with planted citations", _cmd_synth)
    p.add_argument("--spec", help="JSON file with generator fields")
    p.add_argument("--labels", help="comma-separated technology labels")
    p.add_argument("--start-years", help="comma-separated first publication years")
    p.add_argument("--end-year", type=int)
    p.add_argument("--papers-per-year", type=int)
    p.add_argument("--planted-order", help="labels least to most advanced, comma-separated")
    p.add_argument("--cite-base", type=float)
    p.add_argument("--cite-boost", type=float)
    p.add_argument("--pool-relevant", type=int)
    p.add_argument("--pool-irrelevant", type=int)
    p.add_argument("--target-relevant", type=int)
    p.add_argument("--target-noise", type=int)
    p.add_argument("--seed", type=int, help=f"generator seed (default {DEFAULT_SEED})")

    p = add("report", "bundle stage outputs into one JSON report with figures", _cmd_report)
    p.add_argument("--matrix", help="matrix CSV")
    p.add_argument("--scores", help="score CSV")
    p.add_argument("--series", help="series CSV")
    p.add_argument("--volumes", help="volume CSV")
    p.add_argument("--evaluation", dest="evaluation_file", help="evaluation report CSV")
    p.add_argument("-o", "--output", help="report JSON (default report.json)")

    return parser


def _add_series_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--floor-year", type=int, help="first assessable year (default 2010)")
    p.add_argument("--share", type=float, help="onset volume share (default 0.01)")
    p.add_argument("--from-year", type=int, help="first year of cumulative slices (default 2000)")
    p.add_argument("--max-year", type=int,
                   help="last assessed year (default: latest publication year)")
    p.add_argument("-a", "--log-base", type=float, help="weight logarithm base (default 2)")
    p.add_argument("-b", "--offset", type=float, help="weight additive offset (default 2)")
    p.add_argument("--include-intra", action="store_true", default=None)
    p.add_argument("--multiset", action="store_true", default=None)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.handler(args, config)
    except TechflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, OSError, ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))


# --- shared plumbing ---

def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        config = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return config


def _opt(args, config, key, default):
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key, default)
    return value


def _out_dir(args, config) -> Path:
    out = _opt(args, config, "out_dir", None) or os.environ.get("TECHFLOW_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _out_path(args, config, key, default_name) -> Path:
    name = _opt(args, config, key, default_name)
    path = Path(name)
    return path if path.is_absolute() else _out_dir(args, config) / path


def _require(args, config, key, flag) -> str:
    value = _opt(args, config, key, None)
    if value is None:
        raise ConfigError(f"{flag} is required (flag or config key {key!r})")
    return value


def _load_corpora(args, config) -> list[TechCorpus]:
    pairs: list[tuple[str, str]] = []
    if args.corpora:
        for item in args.corpora:
            label, sep, path = item.partition("=")
            if not sep or not label or not path:
                raise ConfigError(f"corpus argument {item!r} must look like LABEL=FILE")
            pairs.append((label, path))
    else:
        technologies = config.get("technologies")
        if not technologies:
            raise ConfigError("give LABEL=FILE corpus arguments or a config "
                              "with a 'technologies' mapping")
        pairs.extend(technologies.items())
    return [load_canonical(resolve_input(path), label=label) for label, path in pairs]


def _params(args, config) -> ModelParams:
    return ModelParams(log_base=float(_opt(args, config, "log_base", 2.0)),
                       offset=float(_opt(args, config, "offset", 2.0)))


def _series_args(args, config, corpora):
    floor_year = int(_opt(args, config, "floor_year", timeseries.DEFAULT_FLOOR_YEAR))
    max_year = _opt(args, config, "max_year", None)
    if max_year is None:
        dated = [r.pub_year for c in corpora for r in c.records if r.pub_year is not None]
        if not dated:
            raise ConfigError("no dated records; give --max-year explicitly")
        max_year = max(dated)
    return dict(
        years=range(floor_year, int(max_year) + 1),
        params=_params(args, config),
        floor_year=floor_year,
        share=float(_opt(args, config, "share", timeseries.DEFAULT_ONSET_SHARE)),
        from_year=int(_opt(args, config, "from_year", timeseries.DEFAULT_FROM_YEAR)),
        include_intra=bool(_opt(args, config, "include_intra", False)),
        multiset=bool(_opt(args, config, "multiset", False)),
    )


# --- subcommands ---

def _cmd_parse(args, config) -> int:
    source = resolve_input(args.input)
    records = parse_export(source)
    output = _out_path(args, config, "output", f"{source.stem}.jsonl")
    save_canonical(records, output)
    print(f"parsed {len(records)} records -> {output}")
    return 0


def _cmd_filter_train(args, config) -> int:
    examples = filtering.load_labeled(resolve_input(_require(args, config, "labeled", "--labeled")))
    split = float(_opt(args, config, "split", filtering.DEFAULT_SPLIT))
    penalty = float(_opt(args, config, "penalty", filtering.DEFAULT_PENALTY))
    seed = int(_opt(args, config, "seed", DEFAULT_SEED))
    runs = int(_opt(args, config, "runs", 10))
    if runs < 1:
        raise ConfigError("--runs must be at least 1")
    final = _opt(args, config, "final_model", "best")
    results = [filtering.train(examples, split=split, penalty=penalty, seed=seed + i)
               for i in range(runs)]
    mean_accuracy = sum(acc for _, acc in results) / runs
    if final == "retrain":
        model, _ = filtering.train(examples, split=0.0, penalty=penalty, seed=seed)
    else:
        model = max(results, key=lambda pair: pair[1])[0]
    output = _out_path(args, config, "output", "model.json")
    filtering.save_model(model, output)
    print(f"trained {runs} run(s): mean holdout accuracy {mean_accuracy:.4f}, "
          f"deployed {final} -> {output}")
    return 0


def _cmd_filter_apply(args, config) -> int:
    model = filtering.load_model(resolve_input(_require(args, config, "model", "--model")))
    corpus = load_canonical(resolve_input(_require(args, config, "records", "--records")))
    labels = filtering.classify(model, corpus.records)
    kept = [r for r, label in zip(corpus.records, labels) if label == 1]
    output = _out_path(args, config, "output", "filtered.jsonl")
    save_canonical(kept, output)
    print(f"kept {len(kept)} of {len(corpus.records)} records -> {output}")
    return 0


def _cmd_stability(args, config) -> int:
    pool = filtering.load_labeled(resolve_input(_require(args, config, "labeled", "--labeled")))
    target = load_canonical(resolve_input(_require(args, config, "target", "--target")))
    curve = filtering.stability_curve(
        pool, target,
        max_n=int(_opt(args, config, "max_n", filtering.DEFAULT_SAMPLE_SIZE)),
        seed=int(_opt(args, config, "seed", DEFAULT_SEED)),
        split=float(_opt(args, config, "split", filtering.DEFAULT_SPLIT)),
        penalty=float(_opt(args, config, "penalty", filtering.DEFAULT_PENALTY)),
    )
    output = _out_path(args, config, "output", "stability.csv")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "relevant_count", "stability"])
    for point in curve.points:
        sigma = "" if point.stability is None else repr(point.stability)
        writer.writerow([point.n, point.relevant_count, sigma])
    output.write_text(buffer.getvalue(), encoding="utf-8", newline="\n")
    threshold = float(_opt(args, config, "threshold", filtering.STABILITY_THRESHOLD))
    stable = filtering.stable_sample_size(curve, threshold)
    verdict = f"stable from n={stable}" if stable is not None else "no stable plateau"
    print(f"{verdict} (threshold {threshold}) -> {output}")
    return 0


def _cmd_matrix(args, config) -> int:
    corpora = _load_corpora(args, config)
    matrix = graph.build_matrix(corpora, multiset=bool(_opt(args, config, "multiset", False)))
    output = _out_path(args, config, "output", "matrix.csv")
    graph.write_matrix(matrix, output)
    print(f"{matrix.k}x{matrix.k} matrix over {', '.join(matrix.labels)} -> {output}")
    return 0


def _cmd_score(args, config) -> int:
    matrix = graph.read_matrix(resolve_input(_require(args, config, "matrix", "--matrix")))
    result = advancement.advancement_index(matrix, _params(args, config))
    output = _out_path(args, config, "output", "scores.csv")
    advancement.write_scores(result, output)
    json_output = _opt(args, config, "json_output", None)
    if json_output:
        advancement.write_scores_json(result, _out_path(args, config, "json_output", json_output))
    ranking = " > ".join("=".join(group) for group in advancement.rank(result))
    print(f"ranking: {ranking} -> {output}")
    return 0


def _cmd_baselines(args, config) -> int:
    corpora = _load_corpora(args, config)
    multiset = bool(_opt(args, config, "multiset", False))
    matrix = graph.build_matrix(corpora, multiset=multiset)
    rows = baselines.baselines_table(
        corpora, matrix, include_intra=bool(_opt(args, config, "include_intra", False)))
    output = _out_path(args, config, "output", "baselines.csv")
    baselines.write_baselines(rows, output)
    print(f"baselines for {len(rows)} technologies -> {output}")
    return 0


def _cmd_timeseries(args, config) -> int:
    corpora = _load_corpora(args, config)
    series = timeseries.score_series(corpora, **_series_args(args, config, corpora))
    output = _out_path(args, config, "output", "series.csv")
    timeseries.write_series(series, output)
    volumes_path = _out_path(args, config, "volumes", "volumes.csv")
    timeseries.write_volumes([timeseries.volume_series(c) for c in corpora], volumes_path)
    assessed = sum(1 for entry in series if entry.scores)
    print(f"scored {assessed} of {len(series)} years -> {output} (volumes: {volumes_path})")
    return 0


def _cmd_evaluate(args, config) -> int:
    corpora = _load_corpora(args, config)
    truth_arg = _require(args, config, "truth", "--truth")
    truth_labels = (tuple(truth_arg) if isinstance(truth_arg, (list, tuple))
                    else tuple(part.strip() for part in truth_arg.split(",") if part.strip()))
    truth = evaluation.GroundTruth(order=truth_labels)
    series_kwargs = _series_args(args, config, corpora)
    series = timeseries.score_series(corpora, **series_kwargs)
    full = timeseries.method_scores(
        corpora,
        params=series_kwargs["params"],
        include_intra=series_kwargs["include_intra"],
        multiset=series_kwargs["multiset"],
    )
    metric = _opt(args, config, "metric", evaluation.PAIRWISE)
    report = evaluation.evaluate_methods(series, full, truth, metric=metric)
    output = _out_path(args, config, "output", "evaluation.csv")
    evaluation.write_report(report, output)
    annual_path = _out_path(args, config, "annual", "annual.csv")
    evaluation.write_annual(report, annual_path)
    for method in report.methods:
        print(f"{method}: overall {report.overall[method]:.3f}, "
              f"mean annual {report.mean_annual[method]:.3f}")
    print(f"-> {output} (per-year: {annual_path})")
    return 0


def _cmd_synth(args, config) -> int:
    spec_fields = dict(config)
    spec_fields.pop("out_dir", None)
    spec_path = _opt(args, config, "spec", None)
    if spec_path:
        loaded = json.loads(Path(spec_path).read_text("utf-8"))
        if not isinstance(loaded, dict):
            raise ConfigError("--spec file must hold a JSON object")
        spec_fields.update(loaded)
    for key in ("labels", "start_years", "planted_order"):
        flag = getattr(args, key, None)
        if flag is not None:
            spec_fields[key] = [part.strip() for part in flag.split(",") if part.strip()]
    for key in ("end_year", "papers_per_year", "cite_base", "cite_boost", "pool_relevant",
                "pool_irrelevant", "target_relevant", "target_noise", "seed"):
        flag = getattr(args, key, None)
        if flag is not None:
            spec_fields[key] = flag
    if "start_years" in spec_fields:
        spec_fields["start_years"] = [int(y) for y in spec_fields["start_years"]]
    if "cite_rate" in spec_fields:
        spec_fields["cite_rate"] = tuple(tuple(row) for row in spec_fields["cite_rate"])
    spec_fields.setdefault("seed", DEFAULT_SEED)
    missing = [k for k in ("labels", "start_years", "end_year") if k not in spec_fields]
    if missing:
        raise ConfigError(f"synth needs {', '.join('--' + k.replace('_', '-') for k in missing)}")
    try:
        spec = SyntheticSpec(**{k: tuple(v) if isinstance(v, list) else v
                                for k, v in spec_fields.items()})
    except TypeError as exc:
        raise ConfigError(f"bad generator field: {exc}") from None
    study = generate(spec)
    out = _out_dir(args, config)
    written = []
    for corpus in study.corpora:
        path = out / f"{corpus.label}.jsonl"
        save_canonical(corpus.records, path)
        written.append(path.name)
    matrix = graph.CrossCitationMatrix(labels=spec.labels, counts=study.planted_cross_counts())
    graph.write_matrix(matrix, out / "planted_matrix.csv")
    written.append("planted_matrix.csv")
    if study.labeled_pool:
        filtering.save_labeled(study.labeled_pool, out / "pool.jsonl")
        written.append("pool.jsonl")
    if study.unfiltered is not None:
        save_canonical(study.unfiltered.records, out / "retrieved.jsonl")
        written.append("retrieved.jsonl")
    print(f"synthetic study (seed {spec.seed}) -> {out}: {', '.join(written)}")
    return 0


def _cmd_report(args, config) -> int:
    sources = {key: _opt(args, config, key, None)
               for key in ("matrix", "scores", "series", "volumes", "evaluation_file")}
    if not any(sources.values()):
        raise ConfigError("report needs at least one stage output "
                          "(--matrix/--scores/--series/--volumes/--evaluation)")
    out = _out_dir(args, config)
    summary: dict = {}
    figures: list[str] = []

    if sources["matrix"]:
        matrix = graph.read_matrix(resolve_input(sources["matrix"]))
        degrees = graph.degree_summary(matrix)
        summary["technologies"] = list(matrix.labels)
        summary["citation_flow"] = {
            "total": degrees.total,
            "in_degrees": dict(zip(degrees.labels, degrees.in_degrees)),
            "out_degrees": dict(zip(degrees.labels, degrees.out_degrees)),
        }
    if sources["scores"]:
        result = advancement.read_scores(resolve_input(sources["scores"]))
        summary.setdefault("technologies", list(result.labels))
        summary["scores"] = result.as_mapping()
        summary["ranking"] = advancement.rank(result)
        summary["params"] = {"log_base": result.params.log_base,
                             "offset": result.params.offset}
        figures.append(plots.plot_scores(result, out / "scores.png").name)
    if sources["volumes"]:
        volumes = timeseries.read_volumes(resolve_input(sources["volumes"]))
        summary["volume_totals"] = {v.label: v.total for v in volumes}
        figures.append(plots.plot_volumes(volumes, out / "volumes.png").name)
    if sources["series"]:
        series = timeseries.read_series(resolve_input(sources["series"]))
        methods = [m for m in timeseries.METHODS
                   if any(m in entry.scores for entry in series)]
        summary["assessed_years"] = [entry.year for entry in series]
        for method in methods:
            name = f"series_{method}.png"
            figures.append(plots.plot_score_series(series, method, out / name).name)
    if sources["evaluation_file"]:
        loaded = evaluation.read_report(resolve_input(sources["evaluation_file"]))
        summary["accuracy"] = loaded
        report = evaluation.EvaluationReport(
            methods=tuple(loaded),
            overall={m: v["overall_accuracy"] for m, v in loaded.items()},
            mean_annual={m: v["mean_annual_accuracy"] for m, v in loaded.items()},
            annual={m: {} for m in loaded},
        )
        figures.append(plots.plot_accuracy(report, out / "accuracy.png").name)

    summary["figures"] = figures
    output = _out_path(args, config, "output", "report.json")
    output.write_text(json.dumps(summary, ensure_ascii=False, indent=2) + "\n",
                      encoding="utf-8", newline="\n")
    print(f"report with {len(figures)} figure(s) -> {output}")
    return 0
