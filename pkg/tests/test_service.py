from __future__ import annotations

import numpy as np
import pytest
from fastapi.testclient import TestClient

from vsem import snapshot
from vsem.dataset import generate_synthetic
from vsem.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def new_session(client, **kwargs):
    response = client.post("/sessions", json=kwargs or {})
    assert response.status_code == 200
    return response.json()["session_id"]


def submit(client, sid, sequence_id, frames):
    return client.post(f"/sessions/{sid}/encounters",
                       json={"sequence_id": sequence_id, "frames": frames})


def teach(client, sid, sequence_id, frames, same_genus=None, different=None):
    """Drive one encounter through its query flow with the given answers."""
    response = submit(client, sid, sequence_id, frames)
    assert response.status_code == 200
    body = response.json()
    if body["state"] == "decided":
        return body
    assert body["query"]["kind"] == "same_genus"
    response = client.post(f"/sessions/{sid}/answer", json={"answer": same_genus})
    body = response.json()
    if body["state"] == "decided":
        return body
    assert body["query"]["kind"] == "different"
    response = client.post(f"/sessions/{sid}/answer", json={"answer": different})
    return response.json()


FRAMES_A = [[0.0, 0.0]] * 4
FRAMES_A2 = [[0.2, 0.0]] * 4
FRAMES_B = [[8.0, 8.0]] * 4


# --- session lifecycle -------------------------------------------------------

def test_create_and_describe_session(client):
    sid = new_session(client, window=10, stride=4)
    response = client.get(f"/sessions/{sid}")
    assert response.status_code == 200
    body = response.json()
    assert body["window"] == 10
    assert body["stride"] == 4
    assert body["iteration"] == 0
    assert body["objects"] == 0
    assert body["theta"] == 0.0


def test_create_session_defaults(client):
    response = client.post("/sessions", json={})
    body = response.json()
    assert body["window"] == 50
    assert body["stride"] == 15


def test_create_session_rejects_bad_settings(client):
    assert client.post("/sessions", json={"window": 0}).status_code == 400
    assert client.post("/sessions", json={"stride": -1}).status_code == 400


def test_unknown_session_is_404(client):
    assert client.get("/sessions/nope").status_code == 404
    assert client.post("/sessions/nope/answer", json={"answer": True}).status_code == 404
    assert client.get("/sessions/nope/hierarchy").status_code == 404


def test_cors_headers_present(client):
    response = client.get("/sessions/nope", headers={"Origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") == "*"


# --- encounter and answer flows -------------------------------------------------

def test_first_encounter_decides_immediately(client):
    sid = new_session(client)
    body = teach(client, sid, "a-0", FRAMES_A)
    assert body["state"] == "decided"
    decision = body["decision"]
    assert decision["kind"] == "new_object"
    assert decision["created_object"] == 0
    assert decision["matched_object"] is None
    assert decision["supervised"] is False
    assert decision["iteration"] == 1


def test_second_encounter_parks_same_genus_query(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    response = submit(client, sid, "b-0", FRAMES_B)
    body = response.json()
    assert body["state"] == "pending"
    query = body["query"]
    assert query["kind"] == "same_genus"
    assert query["object_id"] == 0
    assert query["sequence_id"] == "b-0"
    assert query["object_distance"] == pytest.approx(np.hypot(8, 8))
    assert client.get(f"/sessions/{sid}/query").json()["query"]["query_id"] == query["query_id"]


def test_no_answer_means_409_on_next_encounter(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    submit(client, sid, "b-0", FRAMES_B)
    assert submit(client, sid, "c-0", FRAMES_B).status_code == 409


def test_answer_without_pending_query_is_409(client):
    sid = new_session(client)
    assert client.post(f"/sessions/{sid}/answer", json={"answer": True}).status_code == 409


def test_not_same_genus_founds_object(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    body = teach(client, sid, "b-0", FRAMES_B, same_genus=False)
    decision = body["decision"]
    assert decision["kind"] == "new_object"
    assert decision["created_object"] == 1
    assert decision["supervised"] is True


def test_same_genus_then_different_links_edge(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    body = teach(client, sid, "b-0", FRAMES_B, same_genus=True, different=True)
    decision = body["decision"]
    assert decision["kind"] == "new_object_same_genus"
    assert decision["created_object"] == 1
    assert decision["matched_object"] == 0


def test_same_genus_not_different_merges(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    body = teach(client, sid, "a-1", FRAMES_A2, same_genus=True, different=False)
    decision = body["decision"]
    assert decision["kind"] == "merged_into_existing"
    assert decision["created_object"] is None
    response = client.get(f"/sessions/{sid}")
    assert response.json()["objects"] == 1


def test_theta_evolves_with_answers(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    body = teach(client, sid, "a-1", FRAMES_A2, same_genus=True, different=False)
    theta_one = body["decision"]["theta"]
    assert theta_one > 0.0
    body = teach(client, sid, "b-0", FRAMES_B, same_genus=False)
    assert body["decision"]["theta"] != 0.0


def test_previews_are_limited_and_nearest_first(client):
    frames = [[float(k), 0.0] for k in range(40)]
    sid = new_session(client, window=4, stride=4)
    teach(client, sid, "many-0", frames)
    response = submit(client, sid, "probe-0", [[0.0, 0.0]] * 4)
    query = response.json()["query"]
    preview = query["object_preview"]
    assert len(preview) == 3
    firsts = [p["centroid"][0] for p in preview]
    assert firsts == sorted(firsts)
    assert all(len(p["centroid"]) == 2 for p in preview)
    assert len(query["encounter_preview"]) == 1


def test_submit_validation_errors(client):
    sid = new_session(client)
    no_source = client.post(f"/sessions/{sid}/encounters", json={"sequence_id": "x"})
    assert no_source.status_code == 400
    both = client.post(f"/sessions/{sid}/encounters",
                       json={"sequence_id": "x", "frames": FRAMES_A, "manifest": "m.json"})
    assert both.status_code == 400
    unnamed = client.post(f"/sessions/{sid}/encounters", json={"frames": FRAMES_A})
    assert unnamed.status_code == 400
    empty = client.post(f"/sessions/{sid}/encounters",
                        json={"sequence_id": "x", "frames": []})
    assert empty.status_code == 400
    ragged = client.post(f"/sessions/{sid}/encounters",
                         json={"sequence_id": "x", "frames": [[1.0], [1.0, 2.0]]})
    assert ragged.status_code == 400


def test_dimension_mismatch_rejected(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    bad = submit(client, sid, "b-0", [[1.0, 2.0, 3.0]] * 4)
    assert bad.status_code == 400


def test_manifest_reference_submission(client, tmp_path):
    manifest = generate_synthetic(
        num_genera=1, instances_per_genus=1, sequences_with_differentia=1,
        sequences_without_differentia=1, frames_per_sequence=30, dim=4,
        genus_spread=0.2, differentia_offset=6.0, noise=0.02, seed=2,
        out_dir=tmp_path)
    sid = new_session(client, window=10, stride=5)
    rec = manifest.sequences[0]
    response = client.post(f"/sessions/{sid}/encounters",
                           json={"sequence_id": rec.sequence_id,
                                 "manifest": str(tmp_path / "manifest.json")})
    assert response.status_code == 200
    assert response.json()["state"] == "decided"
    missing = client.post(f"/sessions/{sid}/encounters",
                          json={"sequence_id": "ghost",
                                "manifest": str(tmp_path / "manifest.json")})
    assert missing.status_code == 400
    gone = client.post(f"/sessions/{sid}/encounters",
                       json={"sequence_id": rec.sequence_id,
                             "manifest": str(tmp_path / "nope.json")})
    assert gone.status_code == 400


# --- hierarchy and snapshots -------------------------------------------------------

def test_hierarchy_endpoint_matches_export(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    teach(client, sid, "a-1", FRAMES_A2, same_genus=True, different=True)
    teach(client, sid, "b-0", FRAMES_B, same_genus=False)
    body = client.get(f"/sessions/{sid}/hierarchy").json()
    assert body["root"] == "thing"
    assert [m["object_id"] for g in body["groups"] for m in g["members"]] == [0, 1]
    assert [e["object_id"] for e in body["isolated"]] == [2]


def test_snapshot_and_restore_round_trip(client):
    sid = new_session(client)
    teach(client, sid, "a-0", FRAMES_A)
    teach(client, sid, "a-1", FRAMES_A2, same_genus=True, different=True)
    doc = client.post(f"/sessions/{sid}/snapshot").json()["snapshot"]

    restored = client.post("/sessions/from-snapshot",
                           json={"snapshot": doc, "window": 50, "stride": 15})
    assert restored.status_code == 200
    body = restored.json()
    new_sid = body["session_id"]
    assert new_sid != sid
    assert body["iteration"] == 2
    assert body["objects"] == 2
    again = client.post(f"/sessions/{new_sid}/snapshot").json()["snapshot"]
    assert again == doc
    # The restored session keeps answering queries.
    response = submit(client, new_sid, "b-0", FRAMES_B)
    assert response.json()["state"] == "pending"


def test_restore_rejects_corrupt_snapshot(client):
    response = client.post("/sessions/from-snapshot", json={"snapshot": {"format_version": 99}})
    assert response.status_code == 400


def test_snapshot_of_fresh_session_is_loadable(client):
    sid = new_session(client)
    doc = client.post(f"/sessions/{sid}/snapshot").json()["snapshot"]
    memory = snapshot.from_document(doc)
    assert memory.objects == {}


def test_sessions_are_isolated(client):
    sid_a = new_session(client)
    sid_b = new_session(client)
    teach(client, sid_a, "a-0", FRAMES_A)
    assert client.get(f"/sessions/{sid_a}").json()["objects"] == 1
    assert client.get(f"/sessions/{sid_b}").json()["objects"] == 0
