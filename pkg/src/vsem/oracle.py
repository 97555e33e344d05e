"""Simulated user: noiseless answers derived from dataset labels.

The simulated user tags each memory object with the labels of the sequence
that founded it; answers then reduce to label comparisons. Same genus means
equal genus labels, different individual means unequal instance ids. Tags
are immutable: whatever an object later absorbs, it keeps the identity of
its founding encounter.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .perception import Encounter

DEFAULT_BOOTSTRAP = 5


class SimulatedUser:
    """Label-driven supervision source with Bernoulli availability.

    The first `bootstrap` iterations are always supervised so the threshold
    store never starts cold; afterwards each iteration that asks is answered
    with probability `alpha`. One draw is consumed per asked iteration, so
    runs with identical memories and datasets see identical availability.
    """

    def __init__(self, alpha: float, labels: dict[str, tuple[str, str]],
                 rng: np.random.Generator | int | np.random.SeedSequence,
                 bootstrap: int = DEFAULT_BOOTSTRAP) -> None:
        if not 0.0 <= alpha <= 1.0:
            raise PreconditionError(f"alpha must lie in [0, 1], got {alpha}")
        if bootstrap < 0:
            raise PreconditionError("bootstrap must be >= 0")
        self.alpha = float(alpha)
        self.bootstrap = int(bootstrap)
        self._labels = dict(labels)
        self._rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self._tags: dict[int, tuple[str, str]] = {}

    # -- tagging ----------------------------------------------------------

    def tag_object(self, object_id: int, sequence_id: str) -> None:
        """Pin the founding sequence's labels onto a newly created object."""
        if object_id in self._tags:
            raise PreconditionError(f"object {object_id} is already tagged")
        self._tags[object_id] = self._lookup(sequence_id)

    def genus_tag(self, object_id: int) -> str:
        return self._tag(object_id)[0]

    def instance_tag(self, object_id: int) -> str:
        return self._tag(object_id)[1]

    def _tag(self, object_id: int) -> tuple[str, str]:
        try:
            return self._tags[object_id]
        except KeyError:
            raise PreconditionError(f"object {object_id} was never tagged") from None

    def _lookup(self, sequence_id: str) -> tuple[str, str]:
        try:
            return self._labels[sequence_id]
        except KeyError:
            raise PreconditionError(f"no labels for sequence {sequence_id!r}") from None

    # -- SupervisionSource ------------------------------------------------

    def available(self, iteration: int) -> bool:
        if iteration < self.bootstrap:
            return True
        return bool(self._rng.random() < self.alpha)

    def answer_same_genus(self, object_id: int, encounter: Encounter) -> bool:
        return self.genus_tag(object_id) == self._lookup(encounter.sequence_id)[0]

    def answer_different(self, object_id: int, encounter: Encounter) -> bool:
        return self.instance_tag(object_id) != self._lookup(encounter.sequence_id)[1]
