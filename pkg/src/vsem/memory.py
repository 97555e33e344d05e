"""Object memory: visual-object sets that only grow, same-genus links, hierarchy export.

An object in memory is the union of the visual objects of every encounter
that was merged into it. Same-genus links are undirected edges recorded when
the user confirms two objects share a genus; the genus of an object is then
the subset of its visual objects that resemble a linked neighbour. What is
left over is the object's differentia, and two same-genus objects are
"different" exactly when their differentia parts share no similar pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PreconditionError
from .perception import Encounter, VisualObject
from .similarity import cross_distances, min_cross_distance
from .threshold import SupervisionStore

ROOT_CONCEPT = "thing"


class MemoryObject:
    """One remembered object: a monotonically growing set of visual objects.

    Set membership is by source span, so re-merging an already absorbed
    encounter is a no-op.
    """

    def __init__(self, object_id: int, encounter: Encounter, iteration: int) -> None:
        self.object_id = object_id
        self.created_at = iteration
        self.updated_at = iteration
        self._by_source: dict[tuple[str, int, int], VisualObject] = {}
        self._matrix: np.ndarray | None = None
        for vo in encounter.visual_objects:
            self._by_source.setdefault(vo.source, vo)

    @property
    def visual_objects(self) -> tuple[VisualObject, ...]:
        return tuple(self._by_source.values())

    @property
    def centroids(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.stack([vo.centroid for vo in self._by_source.values()])
            self._matrix.flags.writeable = False
        return self._matrix

    def __len__(self) -> int:
        return len(self._by_source)

    def absorb(self, encounter: Encounter, iteration: int) -> None:
        for vo in encounter.visual_objects:
            if vo.source not in self._by_source:
                self._by_source[vo.source] = vo
                self._matrix = None
        self.updated_at = iteration


class Memory:
    """All objects seen so far plus the supervision gathered about them."""

    def __init__(self) -> None:
        self.objects: dict[int, MemoryObject] = {}
        self.sg_edges: set[tuple[int, int]] = set()
        self.supervision = SupervisionStore()
        self.iteration = 0
        self.next_object_id = 0
        self._stack: tuple[np.ndarray, np.ndarray, list[int]] | None = None
        self._genus_cache: dict[tuple[int, float], list[VisualObject]] = {}

    @property
    def theta(self) -> float:
        return self.supervision.theta

    @property
    def dimension(self) -> int | None:
        for obj in self.objects.values():
            return int(obj.centroids.shape[1])
        return None

    def _invalidate(self) -> None:
        self._stack = None
        self._genus_cache.clear()

    def _get(self, object_id: int) -> MemoryObject:
        try:
            return self.objects[object_id]
        except KeyError:
            raise KeyError(f"unknown object id {object_id}") from None

    def _check_dimension(self, encounter: Encounter) -> None:
        dim = self.dimension
        if dim is not None and encounter.centroids.shape[1] != dim:
            raise DimensionMismatch(
                f"encounter dimension {encounter.centroids.shape[1]} != memory dimension {dim}")

    # -- mutation ---------------------------------------------------------

    def add_object(self, encounter: Encounter) -> int:
        """Found a new object from an encounter. Does not advance the iteration."""
        self._check_dimension(encounter)
        object_id = self.next_object_id
        self.next_object_id += 1
        self.objects[object_id] = MemoryObject(object_id, encounter, self.iteration)
        self._invalidate()
        return object_id

    def update_object(self, object_id: int, encounter: Encounter) -> None:
        """Merge an encounter into an existing object (set union of visual objects)."""
        self._check_dimension(encounter)
        self._get(object_id).absorb(encounter, self.iteration)
        self._invalidate()

    def record_same_genus_edge(self, a: int, b: int) -> None:
        self._get(a)
        self._get(b)
        if a == b:
            raise PreconditionError("same-genus edges never loop back to the same object")
        self.sg_edges.add((min(a, b), max(a, b)))
        self._invalidate()

    # -- queries ----------------------------------------------------------

    def neighbors(self, object_id: int) -> list[int]:
        self._get(object_id)
        out = set()
        for a, b in self.sg_edges:
            if a == object_id:
                out.add(b)
            elif b == object_id:
                out.add(a)
        return sorted(out)

    def _stacked(self) -> tuple[np.ndarray, np.ndarray, list[int]]:
        """(matrix of every centroid, per-object start offsets, object ids in id order)."""
        if self._stack is None:
            ids = sorted(self.objects)
            mats = [self.objects[i].centroids for i in ids]
            starts = np.cumsum([0] + [m.shape[0] for m in mats[:-1]])
            self._stack = (np.concatenate(mats, axis=0), starts.astype(np.intp), ids)
        return self._stack

    def object_distances(self, encounter: Encounter) -> list[tuple[int, float]]:
        """Distance from the encounter to every object, in object-id order.

        One vectorized pass over a single stacked centroid matrix; the
        per-object min is a segmented reduction over that stack.
        """
        if not self.objects:
            return []
        self._check_dimension(encounter)
        matrix, starts, ids = self._stacked()
        per_centroid = cross_distances(encounter.centroids, matrix).min(axis=0)
        per_object = np.minimum.reduceat(per_centroid, starts)
        return [(oid, float(d)) for oid, d in zip(ids, per_object)]

    def genus_of(self, object_id: int, theta: float) -> list[VisualObject]:
        """Visual objects of `object_id` similar to some visual object of a linked peer.

        Only user-confirmed same-genus edges count: without supervision an
        object has no genus part, whatever the geometry says.
        """
        key = (object_id, float(theta))
        cached = self._genus_cache.get(key)
        if cached is not None:
            return list(cached)
        obj = self._get(object_id)
        peers = self.neighbors(object_id)
        if not peers or theta <= 0.0:
            result: list[VisualObject] = []
        else:
            peer_matrix = np.concatenate([self.objects[p].centroids for p in peers], axis=0)
            dists = cross_distances(obj.centroids, peer_matrix)
            keep = (dists < theta).any(axis=1)
            result = [vo for vo, k in zip(obj.visual_objects, keep) if k]
        self._genus_cache[key] = result
        return list(result)

    def same_genus(self, object_id: int, encounter: Encounter, theta: float) -> bool:
        """Object similarity: some cross pair of visual objects lies within theta."""
        obj = self._get(object_id)
        self._check_dimension(encounter)
        return min_cross_distance(obj.centroids, encounter.centroids) < theta

    def different(self, object_id: int, encounter: Encounter, theta: float) -> bool:
        """Same-genus objects are different individuals iff their non-genus parts never meet.

        The encounter side is not in memory, so it has no supervised genus
        part and contributes all of its visual objects. Calling this without
        same_genus holding is a contract error.
        """
        if not self.same_genus(object_id, encounter, theta):
            raise PreconditionError("different() is only defined for same-genus pairs")
        genus_sources = {vo.source for vo in self.genus_of(object_id, theta)}
        rest = [vo.centroid for vo in self._get(object_id).visual_objects
                if vo.source not in genus_sources]
        if not rest:
            return True
        return min_cross_distance(np.stack(rest), encounter.centroids) >= theta


@dataclass(frozen=True)
class HierarchyGroup:
    """One genus group: the objects of a same-genus component plus their shared views."""

    members: tuple[int, ...]
    genus: tuple[VisualObject, ...]


@dataclass(frozen=True)
class HierarchyView:
    """Depth-2 forest: a synthetic root, genus groups, and ungrouped leaf objects."""

    root: str
    groups: tuple[HierarchyGroup, ...]
    isolated: tuple[int, ...]
    object_sizes: dict[int, int] = field(compare=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "groups": [
                {
                    "members": [
                        {"object_id": oid, "visual_object_count": self.object_sizes[oid]}
                        for oid in group.members
                    ],
                    "genus_visual_object_count": len(group.genus),
                    "genus": [
                        {"sequence_id": vo.sequence_id, "start": vo.start, "end": vo.end}
                        for vo in group.genus
                    ],
                }
                for group in self.groups
            ],
            "isolated": [
                {"object_id": oid, "visual_object_count": self.object_sizes[oid]}
                for oid in self.isolated
            ],
        }


def export_hierarchy(memory: Memory, theta: float) -> HierarchyView:
    """Project memory onto a depth-2 subsumption forest under a synthetic root.

    Objects connected by same-genus edges form one group per connected
    component; the group carries the union of its members' genus parts.
    Objects without edges hang directly under the root. Ordering is
    deterministic: groups by smallest member id, members and leaves by id.
    """
    adjacency: dict[int, set[int]] = {oid: set() for oid in memory.objects}
    for a, b in memory.sg_edges:
        adjacency[a].add(b)
        adjacency[b].add(a)

    seen: set[int] = set()
    groups: list[HierarchyGroup] = []
    isolated: list[int] = []
    for oid in sorted(memory.objects):
        if oid in seen:
            continue
        if not adjacency[oid]:
            seen.add(oid)
            isolated.append(oid)
            continue
        component = []
        frontier = [oid]
        seen.add(oid)
        while frontier:
            node = frontier.pop()
            component.append(node)
            for peer in sorted(adjacency[node]):
                if peer not in seen:
                    seen.add(peer)
                    frontier.append(peer)
        members = tuple(sorted(component))
        genus: list[VisualObject] = []
        sources: set[tuple[str, int, int]] = set()
        for member in members:
            for vo in memory.genus_of(member, theta):
                if vo.source not in sources:
                    sources.add(vo.source)
                    genus.append(vo)
        groups.append(HierarchyGroup(members, tuple(genus)))

    sizes = {oid: len(obj) for oid, obj in memory.objects.items()}
    return HierarchyView(ROOT_CONCEPT, tuple(groups), tuple(isolated), sizes)
