"""Sliding-window perception: a frame-embedding sequence becomes visual objects.

A visual object is the mean of one contiguous window of frames. An encounter
is the ordered collection of visual objects produced from a single sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PreconditionError

DEFAULT_WINDOW = 50
DEFAULT_STRIDE = 15


@dataclass(frozen=True, eq=False)
class VisualObject:
    """Mean embedding of one frame window, tagged with its source span.

    Identity is the source span (sequence_id, start, end), not the centroid:
    two windows cut from the same place in the same sequence are the same
    visual object, and set semantics downstream rely on that.
    """

    centroid: np.ndarray
    sequence_id: str
    start: int
    end: int

    @property
    def source(self) -> tuple[str, int, int]:
        return (self.sequence_id, self.start, self.end)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VisualObject):
            return NotImplemented
        return self.source == other.source

    def __hash__(self) -> int:
        return hash(self.source)


@dataclass(eq=False)
class Encounter:
    """All visual objects perceived from one sequence, in window order."""

    sequence_id: str
    visual_objects: tuple[VisualObject, ...]
    centroids: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.visual_objects:
            raise PreconditionError("an encounter needs at least one visual object")
        if any(vo.sequence_id != self.sequence_id for vo in self.visual_objects):
            raise PreconditionError("all visual objects of an encounter share one sequence_id")
        self.centroids = np.stack([vo.centroid for vo in self.visual_objects]).astype(np.float32)
        self.centroids.flags.writeable = False


def window_spans(n: int, window: int, stride: int) -> list[tuple[int, int]]:
    """Inclusive (start, end) spans of the sliding windows over n frames.

    Window k starts at k*stride. When the sequence is shorter than one
    window, a single span covers every frame; trailing frames that do not
    fill a window are absorbed by the preceding windows' overlap rather than
    emitted as a short window.
    """
    if n < 1:
        raise PreconditionError("need at least one frame")
    if window < 1 or stride < 1:
        raise PreconditionError("window and stride must be >= 1")
    if n < window:
        return [(0, n - 1)]
    count = (n - window) // stride + 1
    return [(k * stride, min(k * stride + window - 1, n - 1)) for k in range(count)]


def perceive(frames, *, window: int = DEFAULT_WINDOW, stride: int = DEFAULT_STRIDE,
             sequence_id: str = "") -> Encounter:
    """Cut a frame sequence into windows and average each into a visual object.

    `frames` is anything ndarray-like of shape (n, dim). Means are taken in
    float64 and stored as float32, matching the payload precision.
    """
    arr = np.asarray(frames, dtype=np.float32)
    if arr.ndim != 2:
        raise DimensionMismatch(f"frames must be 2-d (n, dim), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise PreconditionError("frames must be non-empty with dimension >= 1")
    if not np.isfinite(arr).all():
        raise PreconditionError("frame embeddings must be finite")
    visual_objects = []
    for start, end in window_spans(arr.shape[0], window, stride):
        centroid = arr[start:end + 1].mean(axis=0, dtype=np.float64).astype(np.float32)
        centroid.flags.writeable = False
        visual_objects.append(VisualObject(centroid, sequence_id, start, end))
    return Encounter(sequence_id, tuple(visual_objects))
