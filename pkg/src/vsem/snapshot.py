"""Deterministic JSON snapshots of a Memory.

A snapshot captures everything a Memory holds: objects with their visual
objects, same-genus edges, the supervision store, the fitted threshold, and
the counters. Serialization is canonical (sorted keys, fixed indentation,
objects in id order) so saving the same memory twice yields identical
bytes. Centroids are float32; the shortest-round-trip decimal formatting of
json preserves them exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import PreconditionError, SnapshotError
from .memory import Memory, MemoryObject
from .perception import Encounter, VisualObject
from .threshold import compute_theta

FORMAT_VERSION = 1


def to_document(memory: Memory) -> dict:
    """Plain-JSON representation of a memory."""
    objects = []
    for oid in sorted(memory.objects):
        obj = memory.objects[oid]
        objects.append({
            "object_id": oid,
            "created_at": obj.created_at,
            "updated_at": obj.updated_at,
            "visual_objects": [
                {
                    "sequence_id": vo.sequence_id,
                    "start": vo.start,
                    "end": vo.end,
                    "centroid": [float(x) for x in vo.centroid],
                }
                for vo in obj.visual_objects
            ],
        })
    return {
        "format_version": FORMAT_VERSION,
        "iteration": memory.iteration,
        "next_object_id": memory.next_object_id,
        "theta": memory.supervision.theta,
        "supervision": [[delta, answer] for delta, answer in memory.supervision.pairs],
        "sg_edges": sorted([a, b] for a, b in memory.sg_edges),
        "objects": objects,
    }


def to_bytes(memory: Memory) -> bytes:
    return (json.dumps(to_document(memory), indent=2, sort_keys=True, allow_nan=False)
            + "\n").encode("utf-8")


def save(memory: Memory, path: str | Path) -> None:
    Path(path).write_bytes(to_bytes(memory))


def _require(document: dict, key: str, kinds) -> object:
    if key not in document:
        raise SnapshotError(f"snapshot is missing {key!r}")
    value = document[key]
    if not isinstance(value, kinds) or (kinds is int and isinstance(value, bool)):
        raise SnapshotError(f"snapshot field {key!r} has the wrong type")
    return value


def from_document(document: object) -> Memory:
    """Rebuild a Memory, validating the document before touching anything.

    Restores exactly what was saved; no partial memory ever escapes on error.
    """
    if not isinstance(document, dict):
        raise SnapshotError("snapshot must be a JSON object")
    version = _require(document, "format_version", int)
    if version != FORMAT_VERSION:
        raise SnapshotError(f"unsupported snapshot format_version {version}")

    iteration = _require(document, "iteration", int)
    next_object_id = _require(document, "next_object_id", int)
    theta = float(_require(document, "theta", (int, float)))
    raw_pairs = _require(document, "supervision", list)
    raw_edges = _require(document, "sg_edges", list)
    raw_objects = _require(document, "objects", list)

    memory = Memory()
    dim: int | None = None
    for raw in raw_objects:
        if not isinstance(raw, dict):
            raise SnapshotError("object entries must be JSON objects")
        try:
            oid = int(raw["object_id"])
            created_at = int(raw["created_at"])
            updated_at = int(raw["updated_at"])
            raw_vos = raw["visual_objects"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SnapshotError(f"malformed object entry ({exc})") from exc
        if not isinstance(raw_vos, list) or not raw_vos:
            raise SnapshotError(f"object {oid} must carry a non-empty visual object list")
        if oid in memory.objects:
            raise SnapshotError(f"duplicate object id {oid}")
        visual_objects = []
        for raw_vo in raw_vos:
            try:
                centroid = np.asarray(raw_vo["centroid"], dtype=np.float32)
                vo = VisualObject(centroid, str(raw_vo["sequence_id"]),
                                  int(raw_vo["start"]), int(raw_vo["end"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise SnapshotError(f"malformed visual object in object {oid} ({exc})") from exc
            if centroid.ndim != 1 or not np.isfinite(centroid).all():
                raise SnapshotError(f"object {oid} has an invalid centroid")
            if dim is None:
                dim = centroid.shape[0]
            elif centroid.shape[0] != dim:
                raise SnapshotError("snapshot mixes embedding dimensions")
            centroid.flags.writeable = False
            visual_objects.append(vo)
        # visual objects within one object never share a source span
        sources = {vo.source for vo in visual_objects}
        if len(sources) != len(visual_objects):
            raise SnapshotError(f"object {oid} repeats a source span")
        restored = MemoryObject.__new__(MemoryObject)
        restored.object_id = oid
        restored.created_at = created_at
        restored.updated_at = updated_at
        restored._by_source = {vo.source: vo for vo in visual_objects}
        restored._matrix = None
        memory.objects[oid] = restored

    if next_object_id < (max(memory.objects) + 1 if memory.objects else 0):
        raise SnapshotError("next_object_id collides with a stored object id")

    for raw in raw_edges:
        if (not isinstance(raw, list) or len(raw) != 2
                or not all(isinstance(x, int) for x in raw)):
            raise SnapshotError("sg_edges entries must be [id, id] pairs")
        a, b = raw
        if a == b:
            raise SnapshotError("sg_edges may not contain self-edges")
        if a not in memory.objects or b not in memory.objects:
            raise SnapshotError(f"sg_edge [{a}, {b}] references an unknown object")
        memory.sg_edges.add((min(a, b), max(a, b)))

    for raw in raw_pairs:
        if not isinstance(raw, list) or len(raw) != 2 or not isinstance(raw[1], bool):
            raise SnapshotError("supervision entries must be [delta, answer] pairs")
        try:
            memory.supervision.record(float(raw[0]), raw[1])
        except (PreconditionError, TypeError, ValueError) as exc:
            raise SnapshotError(f"invalid supervision pair {raw!r} ({exc})") from exc

    expected_theta = compute_theta(memory.supervision.pairs)
    if theta != expected_theta:
        raise SnapshotError(
            f"stored theta {theta} does not match its supervision store ({expected_theta})")
    memory.supervision.theta = theta
    memory.iteration = iteration
    memory.next_object_id = next_object_id
    return memory


def load(path: str | Path) -> Memory:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SnapshotError(f"{path}: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"{path}: corrupted snapshot payload ({exc})") from exc
    return from_document(document)
