"""Learning the diversity threshold from pairwise same-genus feedback.

Every supervised same-genus question contributes a pair (delta, answer):
the object distance at which the question was asked and the user's verdict.
The threshold is the value that classifies those pairs best when
"distance < threshold" is read as "predicts same genus".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import PreconditionError


@dataclass
class SupervisionStore:
    """Accumulated (delta, answer) pairs plus the threshold fitted to them."""

    pairs: list[tuple[float, bool]] = field(default_factory=list)
    theta: float = 0.0

    def record(self, delta: float, answer: bool) -> None:
        delta = float(delta)
        if not math.isfinite(delta) or delta < 0.0:
            raise PreconditionError(f"delta must be finite and >= 0, got {delta}")
        self.pairs.append((delta, bool(answer)))

    def refresh(self) -> float:
        """Refit theta to the current pairs and return it."""
        self.theta = compute_theta(self.pairs)
        return self.theta


def compute_theta(pairs: Sequence[tuple[float, bool]]) -> float:
    """Exact maximizer of sum_i 1[(delta_i < t) == answer_i] over thresholds t.

    The objective is piecewise constant, changing only where t crosses a
    recorded delta, so it suffices to score one candidate per interval:
    the midpoints between consecutive distinct deltas, plus min/2 below the
    smallest and max+1 above the largest. Ties break to the smallest
    maximizing candidate, which keeps the learned threshold conservative.
    Empty store yields 0 (nothing is ever similar until told otherwise).

    Sorting dominates: O(n log n) for n pairs.
    """
    if not pairs:
        return 0.0
    deltas = np.asarray([p[0] for p in pairs], dtype=np.float64)
    answers = np.asarray([p[1] for p in pairs], dtype=bool)
    order = np.argsort(deltas, kind="stable")
    deltas_sorted = deltas[order]
    answers_sorted = answers[order]

    distinct = np.unique(deltas_sorted)
    candidates = np.concatenate((
        [distinct[0] / 2.0],
        (distinct[:-1] + distinct[1:]) / 2.0,
        [distinct[-1] + 1.0],
    ))

    # score(t) = #(answer true with delta < t) + #(answer false with delta >= t)
    prefix_true = np.concatenate(([0], np.cumsum(answers_sorted)))
    total_true = int(prefix_true[-1])
    n = deltas_sorted.shape[0]
    below = np.searchsorted(deltas_sorted, candidates, side="left")
    scores = prefix_true[below] + (n - below) - (total_true - prefix_true[below])

    # candidates are ascending and argmax returns the first maximum
    return float(candidates[int(np.argmax(scores))])
