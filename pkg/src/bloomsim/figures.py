"""Bar-chart renderings of classification reports and metric tables.

All functions write image files and return the written path; nothing is
shown interactively. The backend is forced to Agg so rendering works on
headless machines and in CI.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_CHOSEN_COLOR = "#d95f02"
_OTHER_COLOR = "#7570b3"


def save_similarity_bars(report, path) -> Path:
    """One bar per level showing its maximum similarity to the query verb.

    The chosen level is drawn in a contrasting color.
    """
    path = Path(path)
    levels = [s.level for s in report.level_scores]
    values = [s.max_sim for s in report.level_scores]
    colors = [
        _CHOSEN_COLOR if lv == report.chosen_level else _OTHER_COLOR
        for lv in levels
    ]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(levels, values, color=colors)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("max similarity")
    ax.set_title(
        f"'{report.query_verb}' vs {report.domain} levels "
        f"(chosen: {report.chosen_level}, {report.decision_path})"
    )
    ax.tick_params(axis="x", rotation=20)
    for i, value in enumerate(values):
        ax.text(i, value + 0.02, f"{value:.3f}", ha="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_area_bars(report, path) -> Path:
    """One bar per level showing its summed similarity (the tie-break area)."""
    path = Path(path)
    levels = [s.level for s in report.level_scores]
    values = [s.area for s in report.level_scores]
    colors = [
        _CHOSEN_COLOR if lv == report.chosen_level else _OTHER_COLOR
        for lv in levels
    ]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(levels, values, color=colors)
    ax.set_ylabel("area (sum of similarities)")
    ax.set_title(f"'{report.query_verb}': per-level similarity area")
    ax.tick_params(axis="x", rotation=20)
    for i, value in enumerate(values):
        ax.text(i, value, f"{value:.3f}", ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_metric_bars(rows, path) -> Path:
    """Grouped per-class bars for accuracy, precision, recall and F1.

    Expects the per-class rows only; pass the macro row separately if at
    all (it is usually left out of the chart).
    """
    path = Path(path)
    rows = list(rows)
    metrics = ("accuracy", "precision", "recall", "f1")
    classes = [r.class_name for r in rows]
    width = 0.8 / len(metrics)
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for k, metric in enumerate(metrics):
        offsets = [i + (k - (len(metrics) - 1) / 2) * width
                   for i in range(len(classes))]
        ax.bar(offsets, [getattr(r, metric) for r in rows],
               width=width, label=metric)
    ax.set_xticks(range(len(classes)))
    ax.set_xticklabels(classes, rotation=20)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("per-class metrics")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
