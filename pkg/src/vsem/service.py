"""Interactive teaching over HTTP: one learner session per teacher.

A session wraps a Memory plus perception settings. Submitting an encounter
either decides immediately (empty memory founds the first object) or parks
a same-genus question; answering "yes" to same-genus parks the follow-up
different-individual question, whose answer completes the iteration. The
service calls the same primitives in the same order as the batch harness,
so teaching the same answers produces bit-identical snapshots.

Per-session access is serialized by a lock; separate sessions proceed
concurrently (handlers are sync and run on the thread pool).
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import dataset, snapshot
from .errors import VsemError
from .learner import Decision, Retrieval, apply_decision, evaluate_encounter
from .memory import Memory, export_hierarchy
from .perception import DEFAULT_STRIDE, DEFAULT_WINDOW, Encounter, perceive
from .similarity import cross_distances

PREVIEW_LIMIT = 3


class CreateSessionRequest(BaseModel):
    window: int = DEFAULT_WINDOW
    stride: int = DEFAULT_STRIDE


class EncounterRequest(BaseModel):
    """Either inline frames or a reference into a manifest on the server."""

    sequence_id: str | None = None
    frames: list[list[float]] | None = None
    manifest: str | None = None


class AnswerRequest(BaseModel):
    answer: bool


class RestoreRequest(BaseModel):
    snapshot: dict
    window: int = DEFAULT_WINDOW
    stride: int = DEFAULT_STRIDE


@dataclass
class PendingQuery:
    query_id: int
    kind: str  # "same_genus" | "different"
    encounter: Encounter
    retrieval: Retrieval


@dataclass
class Session:
    session_id: str
    window: int
    stride: int
    memory: Memory
    lock: threading.Lock = field(default_factory=threading.Lock)
    pending: PendingQuery | None = None
    next_query_id: int = 0


def _preview(side: np.ndarray, other: np.ndarray, visual_objects) -> list[dict]:
    """Up to three visual objects of one side, nearest to the other side first."""
    nearest = cross_distances(side, other).min(axis=1)
    order = np.argsort(nearest, kind="stable")[:PREVIEW_LIMIT]
    return [
        {
            "sequence_id": visual_objects[i].sequence_id,
            "start": visual_objects[i].start,
            "end": visual_objects[i].end,
            "centroid": [float(x) for x in visual_objects[i].centroid],
        }
        for i in order
    ]


def _query_json(session: Session) -> dict:
    pending = session.pending
    assert pending is not None
    obj = session.memory.objects[pending.retrieval.object_id]
    return {
        "query_id": pending.query_id,
        "kind": pending.kind,
        "object_id": pending.retrieval.object_id,
        "sequence_id": pending.encounter.sequence_id,
        "object_distance": pending.retrieval.distance,
        "object_preview": _preview(obj.centroids, pending.encounter.centroids,
                                   obj.visual_objects),
        "encounter_preview": _preview(pending.encounter.centroids, obj.centroids,
                                      pending.encounter.visual_objects),
    }


def _decision_json(session: Session, decision: Decision) -> dict:
    return {
        "kind": decision.kind.value,
        "matched_object": decision.matched_object,
        "created_object": decision.created_object,
        "predicted_same_genus": decision.predicted_same_genus,
        "predicted_different": decision.predicted_different,
        "supervised": decision.supervised,
        "iteration": session.memory.iteration,
        "theta": session.memory.theta,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="vsem teaching service", version="1.0.0",
                  description="Interactive incremental concept teaching: submit encounters, "
                              "answer same-genus and different-individual questions, inspect "
                              "the learned hierarchy, snapshot and restore sessions.")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    app.state.sessions = sessions

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        return session

    def register(memory: Memory, window: int, stride: int) -> Session:
        if window < 1 or stride < 1:
            raise HTTPException(status_code=400, detail="window and stride must be >= 1")
        session = Session(uuid.uuid4().hex[:12], window, stride, memory)
        with registry_lock:
            sessions[session.session_id] = session
        return session

    def session_json(session: Session) -> dict:
        return {
            "session_id": session.session_id,
            "window": session.window,
            "stride": session.stride,
            "iteration": session.memory.iteration,
            "objects": len(session.memory.objects),
            "theta": session.memory.theta,
        }

    @app.post("/sessions")
    def create_session(request: CreateSessionRequest = Body(default=CreateSessionRequest())) -> dict:
        return session_json(register(Memory(), request.window, request.stride))

    @app.post("/sessions/from-snapshot")
    def restore_session(request: RestoreRequest) -> dict:
        try:
            memory = snapshot.from_document(request.snapshot)
        except VsemError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return session_json(register(memory, request.window, request.stride))

    @app.get("/sessions/{session_id}")
    def describe_session(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return session_json(session)

    @app.post("/sessions/{session_id}/encounters")
    def submit_encounter(session_id: str, request: EncounterRequest) -> dict:
        session = get_session(session_id)
        encounter = _build_encounter(session, request)
        with session.lock:
            if session.pending is not None:
                raise HTTPException(status_code=409,
                                    detail="a query is already pending for this session")
            try:
                retrieval = evaluate_encounter(session.memory, encounter)
            except VsemError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            if retrieval.object_id is None:
                decision = apply_decision(session.memory, encounter, retrieval,
                                          same_genus=False, different=None, supervised=False)
                return {"state": "decided", "decision": _decision_json(session, decision),
                        "query": None}
            session.pending = PendingQuery(session.next_query_id, "same_genus",
                                           encounter, retrieval)
            session.next_query_id += 1
            return {"state": "pending", "decision": None, "query": _query_json(session)}

    @app.get("/sessions/{session_id}/query")
    def get_query(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {"query": _query_json(session) if session.pending else None}

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, request: AnswerRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            pending = session.pending
            if pending is None:
                raise HTTPException(status_code=409, detail="no query is pending")
            if pending.kind == "same_genus":
                if request.answer:
                    session.pending = PendingQuery(session.next_query_id, "different",
                                                   pending.encounter, pending.retrieval)
                    session.next_query_id += 1
                    return {"state": "pending", "decision": None,
                            "query": _query_json(session)}
                session.pending = None
                decision = apply_decision(session.memory, pending.encounter,
                                          pending.retrieval, same_genus=False,
                                          different=None, supervised=True)
                return {"state": "decided", "decision": _decision_json(session, decision),
                        "query": None}
            session.pending = None
            decision = apply_decision(session.memory, pending.encounter, pending.retrieval,
                                      same_genus=True, different=request.answer,
                                      supervised=True)
            return {"state": "decided", "decision": _decision_json(session, decision),
                    "query": None}

    @app.get("/sessions/{session_id}/hierarchy")
    def hierarchy(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            memory = session.memory
            return export_hierarchy(memory, memory.theta).to_dict()

    @app.post("/sessions/{session_id}/snapshot")
    def take_snapshot(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {"snapshot": snapshot.to_document(session.memory)}

    def _build_encounter(session: Session, request: EncounterRequest) -> Encounter:
        if (request.frames is None) == (request.manifest is None):
            raise HTTPException(status_code=400,
                                detail="provide exactly one of 'frames' or 'manifest'")
        if request.sequence_id is None:
            raise HTTPException(status_code=400, detail="'sequence_id' is required")
        try:
            if request.frames is not None:
                frames = np.asarray(request.frames, dtype=np.float32)
            else:
                frames = dataset.load_manifest(request.manifest).load_frames(request.sequence_id)
            return perceive(frames, window=session.window, stride=session.stride,
                            sequence_id=request.sequence_id)
        except (VsemError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    return app
