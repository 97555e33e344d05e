"""Euclidean distances and threshold similarity over frames, visual objects, objects.

Everything downstream hangs off one scalar diversity threshold theta: two
visual objects are similar when their centroid distance is strictly below
theta, and two objects are similar when some cross pair of their visual
objects is. Object distance is the min over all cross pairs, so object
similarity is equivalently `object_distance < theta`.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, PreconditionError

if TYPE_CHECKING:  # pragma: no cover
    from .perception import VisualObject


def frame_distance(a, b) -> float:
    """Euclidean distance between two frame embeddings (computed in float64)."""
    a64 = np.asarray(a, dtype=np.float64)
    b64 = np.asarray(b, dtype=np.float64)
    if a64.ndim != 1 or b64.ndim != 1:
        raise DimensionMismatch("frame embeddings must be 1-d vectors")
    if a64.shape != b64.shape:
        raise DimensionMismatch(f"dimension mismatch: {a64.shape[0]} vs {b64.shape[0]}")
    return float(np.linalg.norm(a64 - b64))


def cross_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise Euclidean distances between rows of `a` and rows of `b`.

    Returns a float64 matrix of shape (len(a), len(b)). Computed by explicit
    differencing rather than the norm-expansion trick; sets here are small
    and the difference form avoids cancellation.
    """
    a64 = np.asarray(a, dtype=np.float64)
    b64 = np.asarray(b, dtype=np.float64)
    if a64.ndim != 2 or b64.ndim != 2:
        raise DimensionMismatch("expected 2-d centroid matrices")
    if a64.shape[1] != b64.shape[1]:
        raise DimensionMismatch(f"dimension mismatch: {a64.shape[1]} vs {b64.shape[1]}")
    diff = a64[:, None, :] - b64[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def min_cross_distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise PreconditionError("min distance over an empty set is undefined")
    return float(cross_distances(a, b).min())


def _stack(visual_objects: Iterable["VisualObject"]) -> np.ndarray:
    centroids = [vo.centroid for vo in visual_objects]
    if not centroids:
        raise PreconditionError("need a non-empty set of visual objects")
    return np.stack(centroids)


def visual_object_similar(a: "VisualObject", b: "VisualObject", theta: float) -> bool:
    """Strict threshold test on centroid distance. theta <= 0 never matches."""
    return frame_distance(a.centroid, b.centroid) < theta


def object_distance(a: Sequence["VisualObject"], b: Sequence["VisualObject"]) -> float:
    """Min centroid distance over all cross pairs of two visual-object sets."""
    return min_cross_distance(_stack(a), _stack(b))


def object_similar(a: Sequence["VisualObject"], b: Sequence["VisualObject"],
                   theta: float) -> bool:
    """True iff some cross pair of visual objects is similar, i.e. distance < theta."""
    return object_distance(a, b) < theta
