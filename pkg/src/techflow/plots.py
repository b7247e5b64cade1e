"""Figure rendering for study reports.

All figures are written as PNG files (the PNG writer embeds no timestamps,
so identical inputs give identical bytes). Callers pass data already loaded
by the corresponding modules; nothing here re-reads pipeline files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .advancement import AdvancementResult
from .evaluation import EvaluationReport
from .timeseries import METHODS, VolumeSeries, YearScores

_DPI = 120


def plot_volumes(series: Sequence[VolumeSeries], path: str | Path) -> Path:
    """Line chart of yearly record counts per technology."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for volumes in series:
        years = sorted(volumes.counts)
        ax.plot(years, [volumes.counts[y] for y in years], marker="o",
                markersize=3, label=volumes.label)
    ax.set_xlabel("year")
    ax.set_ylabel("records")
    ax.set_title("Literature volume per year")
    ax.legend()
    return _save(fig, path)


def plot_scores(result: AdvancementResult, path: str | Path) -> Path:
    """Bar chart of the full-period advancement scores."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(result.labels, result.scores, color="tab:blue")
    ax.set_ylabel("advancement score")
    ax.set_title(f"Full-period scores (base {result.params.log_base:g}, "
                 f"offset {result.params.offset:g})")
    return _save(fig, path)


def plot_score_series(series: Sequence[YearScores], method: str, path: str | Path) -> Path:
    """Line chart of one method's per-year scores, one line per technology."""
    per_label: dict[str, list[tuple[int, float]]] = {}
    for entry in series:
        scores = entry.scores.get(method)
        if not scores:
            continue
        for label, value in scores.items():
            per_label.setdefault(label, []).append((entry.year, value))
    fig, ax = plt.subplots(figsize=(7, 4))
    for label in sorted(per_label):
        points = per_label[label]
        ax.plot([y for y, _ in points], [v for _, v in points], marker="o",
                markersize=3, label=label)
    ax.set_xlabel("year")
    ax.set_ylabel(method)
    ax.set_title(f"Yearly assessment: {method}")
    if per_label:
        ax.legend()
    return _save(fig, path)


def plot_accuracy(report: EvaluationReport, path: str | Path) -> Path:
    """Grouped bars: overall vs. mean annual accuracy for every method."""
    methods = [m for m in METHODS if m in report.methods]
    methods += [m for m in report.methods if m not in methods]
    x = range(len(methods))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - width / 2 for i in x], [report.overall[m] for m in methods],
           width=width, label="overall", color="tab:blue")
    ax.bar([i + width / 2 for i in x], [report.mean_annual[m] for m in methods],
           width=width, label="mean annual", color="tab:orange")
    ax.set_xticks(list(x))
    ax.set_xticklabels(methods, rotation=20, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel(f"{report.metric} accuracy")
    ax.set_title("Ranking accuracy by method")
    ax.legend()
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, format="png", dpi=_DPI)
    plt.close(fig)
    return path
