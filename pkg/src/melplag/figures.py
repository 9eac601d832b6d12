"""Figure rendering for comparison and evaluation reports.

Draws onto Agg canvases directly rather than through pyplot, so no global
backend or figure state is touched; safe for headless runs.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .evalharness import CASE_TYPES
from .match import MatchReport, SimilarityGraph


def save_match_figure(graph: SimilarityGraph, report: MatchReport, path: str | Path) -> Path:
    """Heatmap of clip-pair weights with the optimal matching marked."""
    if graph.swapped:
        a_clips, b_clips = graph.right, graph.left
        matrix = [
            [graph.weights[b][a] for b in range(graph.n)] for a in range(graph.m)
        ]
    else:
        a_clips, b_clips = graph.left, graph.right
        matrix = [list(row) for row in graph.weights]

    fig = Figure(figsize=(7, 5), constrained_layout=True)
    ax = fig.add_subplot()
    image = ax.imshow(matrix, vmin=0.0, vmax=1.0, cmap="viridis", aspect="auto")
    ax.scatter(
        [p.right for p in report.pairs],
        [p.left for p in report.pairs],
        marker="o", facecolors="none", edgecolors="red", s=80, label="matched",
    )
    ax.set_xlabel(f"clips of {b_clips[0].piece_id}")
    ax.set_ylabel(f"clips of {a_clips[0].piece_id}")
    ax.set_title(f"clip similarity, degree {report.degree:.3f}")
    ax.legend(loc="upper right")
    fig.colorbar(image, ax=ax, label="edge weight")

    path = Path(path)
    FigureCanvasAgg(fig).print_figure(str(path), dpi=150)
    return path


def save_eval_figure(evaluation: dict, path: str | Path) -> Path:
    """Grouped bar charts of Accuracy and ARI per case type and detector."""
    results = evaluation["results"]
    detectors = list(results)
    types = [t for t in CASE_TYPES if any(t in results[d] for d in detectors)]

    fig = Figure(figsize=(9, 4.5), constrained_layout=True)
    axes = fig.subplots(1, 2)
    width = 0.8 / max(1, len(detectors))
    for metric, ax, top in (("acc", axes[0], 1.05), ("ari", axes[1], None)):
        for k, det in enumerate(detectors):
            xs = [i + k * width for i in range(len(types))]
            ys = [results[det].get(t, {}).get(metric, 0.0) for t in types]
            ax.bar(xs, ys, width=width, label=det)
        ax.set_xticks([i + 0.4 - width / 2 for i in range(len(types))])
        ax.set_xticklabels(types, rotation=15, ha="right")
        ax.set_title("Accuracy (higher is better)" if metric == "acc" else "ARI (lower is better)")
        if top is not None:
            ax.set_ylim(0, top)
    axes[0].legend(fontsize="small")

    path = Path(path)
    FigureCanvasAgg(fig).print_figure(str(path), dpi=150)
    return path
