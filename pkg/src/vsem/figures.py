"""Accuracy-curve figures rendered next to the CSV output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .harness import AccuracyCurves


def _plot(curves: Sequence[AccuracyCurves], attribute: str, title: str,
          path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for c in sorted(curves, key=lambda c: -c.alpha):
        ax.plot(range(c.iterations), getattr(c, attribute), label=f"alpha = {c.alpha:g}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0.0, 1.02)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_accuracy_figures(curves: Sequence[AccuracyCurves], out_dir: str | Path) -> list[Path]:
    """Write genus and differentia accuracy curves as PNG files; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    genus_path = out_dir / "genus_accuracy.png"
    diff_path = out_dir / "differentia_accuracy.png"
    _plot(curves, "genus_accuracy", "Genus prediction accuracy", genus_path)
    _plot(curves, "differentia_accuracy", "Differentia prediction accuracy", diff_path)
    return [genus_path, diff_path]
