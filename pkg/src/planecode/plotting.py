"""Figures for CLI reports (rendered off-screen to files)."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def write_weight_csv(hamming: dict, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["weight", "count"])
        for weight in sorted(hamming):
            w.writerow([weight, hamming[weight]])
    return path


def plot_weight_distribution(hamming: dict, path, title: str = "", log: bool = True) -> Path:
    """Bar chart of a Hamming weight table (zero word included)."""
    path = Path(path)
    weights = sorted(hamming)
    counts = [hamming[w] for w in weights]
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=120)
    ax.bar(weights, [float(c) for c in counts], width=0.8, color="#3b6ea5", edgecolor="black", linewidth=0.4)
    if log:
        ax.set_yscale("log")
    ax.set_xlabel("Hamming weight")
    ax.set_ylabel("codewords")
    if title:
        ax.set_title(title, fontsize=10)
    for w, c in zip(weights, counts):
        ax.annotate(str(c), (w, float(c)), ha="center", va="bottom", fontsize=7)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_pappus(records: list[dict], path) -> Path:
    """Copies of the Pappus configuration against the field-plane bound, per plane."""
    path = Path(path)
    labels = [r.get("label", str(r["order"])) for r in records]
    xs = range(len(records))
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=120)
    ax.bar([x - 0.2 for x in xs], [float(r["copies"]) for r in records], width=0.4, label="copies")
    ax.bar([x + 0.2 for x in xs], [float(r["bound"]) for r in records], width=0.4, label="bound", alpha=0.6)
    ax.set_xticks(list(xs), labels)
    ax.set_yscale("log")
    ax.set_ylabel("count")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
