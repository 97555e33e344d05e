"""Incremental learning of a depth-2 visual subsumption hierarchy.

Streams of embedded video encounters are perceived as visual objects,
accumulated into remembered objects, and organized under genus groups using
pairwise same-genus / different-individual supervision. The public pieces:

- dataset: payload and manifest I/O plus a synthetic generator
- perception: sliding-window visual objects and encounters
- similarity: distances and the threshold similarity predicates
- threshold: learning the diversity threshold from feedback
- memory: objects, same-genus edges, genus/differentia, hierarchy export
- learner: the per-encounter decision loop
- oracle: a label-driven simulated user
- harness: seeded batch experiments with accuracy curves
- snapshot: deterministic JSON persistence
- service: the interactive HTTP teaching API
- cli: `vsem generate | run | inspect | serve`
"""

from .errors import (DatasetError, DimensionMismatch, PreconditionError, SnapshotError,
                     VsemError)
from .harness import AccuracyCurves, IterationRecord, RunConfig, run_experiment, run_single
from .learner import (Decision, DecisionKind, Retrieval, apply_decision, evaluate_encounter,
                      get_most_similar_object, process_encounter)
from .memory import HierarchyGroup, HierarchyView, Memory, MemoryObject, export_hierarchy
from .oracle import SimulatedUser
from .perception import Encounter, VisualObject, perceive, window_spans
from .similarity import frame_distance, object_distance, object_similar, visual_object_similar
from .threshold import SupervisionStore, compute_theta

__version__ = "0.1.0"

__all__ = [
    "AccuracyCurves", "DatasetError", "Decision", "DecisionKind", "DimensionMismatch",
    "Encounter", "HierarchyGroup", "HierarchyView", "IterationRecord", "Memory",
    "MemoryObject", "PreconditionError", "Retrieval", "RunConfig", "SimulatedUser",
    "SnapshotError", "SupervisionStore", "VisualObject", "VsemError", "apply_decision",
    "compute_theta", "evaluate_encounter", "export_hierarchy", "frame_distance",
    "get_most_similar_object", "object_distance", "object_similar", "perceive",
    "process_encounter", "run_experiment", "run_single", "visual_object_similar",
    "window_spans",
]
