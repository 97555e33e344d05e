"""The incremental decision loop: one encounter in, one memory mutation out.

Each iteration retrieves the most plausible counterpart from memory, commits
to predictions while memory is still untouched, asks the supervision source
(when available) whether the pair shares a genus and whether it is a
different individual, then applies exactly one of three mutations: found a
new object, found a new object linked by a same-genus edge, or merge into
the retrieved object. The diversity threshold is refitted once per
iteration, after any feedback has been recorded.

The same primitives back the batch harness and the interactive service, in
the same order, so both produce bit-identical memories for identical
answers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .memory import Memory
from .perception import Encounter
from .similarity import min_cross_distance


class DecisionKind(enum.Enum):
    NEW_OBJECT = "new_object"
    NEW_OBJECT_SAME_GENUS = "new_object_same_genus"
    MERGED_INTO_EXISTING = "merged_into_existing"


@dataclass(frozen=True)
class Retrieval:
    """Most similar object plus the predictions made before any feedback.

    `predicted_different` means "a different individual than the retrieved
    object": when the model does not even grant a shared genus, the
    individuals cannot be identical, so the flag is true in that case too.
    """

    object_id: int | None
    distance: float | None
    predicted_same_genus: bool
    predicted_different: bool


@dataclass(frozen=True)
class Decision:
    """What one iteration did and what the model believed beforehand."""

    kind: DecisionKind
    matched_object: int | None
    created_object: int | None
    predicted_same_genus: bool
    predicted_different: bool
    supervised: bool


class SupervisionSource(Protocol):
    """Anything that can answer the two questions of an iteration."""

    def available(self, iteration: int) -> bool: ...

    def answer_same_genus(self, object_id: int, encounter: Encounter) -> bool: ...

    def answer_different(self, object_id: int, encounter: Encounter) -> bool: ...


def get_most_similar_object(memory: Memory, encounter: Encounter,
                            theta: float) -> tuple[int | None, float | None]:
    """Pick the object the encounter most plausibly shows. None on empty memory.

    Preference order: the nearest object whose distance beats theta (a seen
    instance); failing that, the object whose supervised genus part lies
    nearest (a seen kind); failing that, the globally nearest object. Ties
    break to the smallest object id. The returned distance is always the
    object distance to the winner, whichever rule picked it.
    """
    distances = memory.object_distances(encounter)
    if not distances:
        return None, None
    by_id = dict(distances)

    under = [(d, oid) for oid, d in distances if d < theta]
    if under:
        d, oid = min(under)
        return oid, d

    with_genus = []
    for oid, _ in distances:
        genus = memory.genus_of(oid, theta)
        if genus:
            genus_matrix = np.stack([vo.centroid for vo in genus])
            with_genus.append((min_cross_distance(encounter.centroids, genus_matrix), oid))
    if with_genus:
        _, oid = min(with_genus)
        return oid, by_id[oid]

    d, oid = min((d, oid) for oid, d in distances)
    return oid, d


def evaluate_encounter(memory: Memory, encounter: Encounter) -> Retrieval:
    """Retrieve and predict against the current memory, mutating nothing."""
    theta = memory.theta
    object_id, distance = get_most_similar_object(memory, encounter, theta)
    if object_id is None:
        return Retrieval(None, None, False, True)
    predicted_same_genus = distance < theta
    if predicted_same_genus:
        predicted_different = memory.different(object_id, encounter, theta)
    else:
        predicted_different = True
    return Retrieval(object_id, distance, predicted_same_genus, predicted_different)


def apply_decision(memory: Memory, encounter: Encounter, retrieval: Retrieval,
                   same_genus: bool, different: bool | None,
                   supervised: bool) -> Decision:
    """Commit one iteration: record feedback, mutate memory, refit theta.

    `different` may be None when `same_genus` is false; it is not consulted
    on that branch. Answered same-genus questions are recorded against the
    retrieval distance before the mutation, the threshold is refitted after,
    and the iteration counter advances exactly once.
    """
    if supervised and retrieval.object_id is not None:
        memory.supervision.record(retrieval.distance, same_genus)

    created: int | None = None
    if retrieval.object_id is None or not same_genus:
        created = memory.add_object(encounter)
        kind = DecisionKind.NEW_OBJECT
    elif different:
        created = memory.add_object(encounter)
        memory.record_same_genus_edge(created, retrieval.object_id)
        kind = DecisionKind.NEW_OBJECT_SAME_GENUS
    else:
        memory.update_object(retrieval.object_id, encounter)
        kind = DecisionKind.MERGED_INTO_EXISTING

    memory.supervision.refresh()
    memory.iteration += 1
    return Decision(
        kind=kind,
        matched_object=retrieval.object_id,
        created_object=created,
        predicted_same_genus=retrieval.predicted_same_genus,
        predicted_different=retrieval.predicted_different,
        supervised=supervised,
    )


def process_encounter(memory: Memory, encounter: Encounter,
                      source: SupervisionSource | None = None) -> Decision:
    """Run one full iteration, asking `source` when it is available.

    Without a source (or when it is unavailable this iteration) the model
    answers its own questions from the predictions; nothing is recorded into
    the supervision store in that case.
    """
    retrieval = evaluate_encounter(memory, encounter)
    if retrieval.object_id is None:
        return apply_decision(memory, encounter, retrieval,
                              same_genus=False, different=None, supervised=False)
    if source is not None and source.available(memory.iteration):
        same_genus = source.answer_same_genus(retrieval.object_id, encounter)
        different = source.answer_different(retrieval.object_id, encounter) if same_genus else None
        return apply_decision(memory, encounter, retrieval, same_genus, different,
                              supervised=True)
    return apply_decision(memory, encounter, retrieval,
                          retrieval.predicted_same_genus, retrieval.predicted_different,
                          supervised=False)
