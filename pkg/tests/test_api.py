import pytest
from fastapi.testclient import TestClient

from sqltutor.api import create_app


@pytest.fixture()
def client(service):
    return TestClient(create_app(service))


def start(client, mode="tutor", difficulty=None):
    body = {"mode": mode, "database_id": "music"}
    if difficulty is not None:
        body["difficulty"] = difficulty
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201
    return resp.json()["session_id"]


def test_list_databases(client):
    resp = client.get("/databases")
    assert resp.status_code == 200
    assert resp.json() == {"databases": ["music"]}


def test_schema_document(client):
    resp = client.get("/databases/music/schema")
    assert resp.status_code == 200
    doc = resp.json()
    assert [t["name"] for t in doc["tables"]] == ["tracks", "distributors", "charts"]


def test_schema_unknown_database_404(client):
    resp = client.get("/databases/nosuch/schema")
    assert resp.status_code == 404
    body = resp.json()
    assert body["code"] == "unknown_database"
    assert body["message"]


def test_start_session(client):
    resp = client.post("/sessions", json={"mode": "tutor", "database_id": "music"})
    assert resp.status_code == 201
    body = resp.json()
    assert body["mode"] == "tutor"
    assert body["earned"] == 0 and body["possible"] == 0
    assert body["session_id"]


def test_start_session_invalid_mode_rejected(client):
    resp = client.post("/sessions", json={"mode": "proctor", "database_id": "music"})
    assert resp.status_code == 422


def test_assessment_without_difficulty_422(client):
    resp = client.post("/sessions", json={"mode": "assessment", "database_id": "music"})
    assert resp.status_code == 422
    assert resp.json()["code"] == "missing_difficulty"


def test_assignments_endpoint(client):
    sid = start(client, "assessment", difficulty=3)
    resp = client.get(f"/sessions/{sid}/assignments")
    assert resp.status_code == 200
    assignments = resp.json()["assignments"]
    assert [a["id"] for a in assignments] == ["a6", "a7"]
    assert all(a["difficulty_label"] == "hard" for a in assignments)
    # the reference solution is never exposed to the client
    assert all("reference_sql" not in a for a in assignments)


def test_translate_endpoint(client):
    sid = start(client)
    resp = client.post(f"/sessions/{sid}/translate", json={"text": "Tracks, please."})
    assert resp.status_code == 200
    body = resp.json()
    assert body["sql_text"].split() == ["SELECT", "*", "FROM", "tracks;"]
    assert body["result_table"]["columns"][0] == "TrackId"
    assert len(body["result_table"]["rows"]) == 10
    assert body["match_diagnostics"]["selected_tables"] == ["tracks"]


def test_translate_failure_maps_to_422_with_hint(client):
    sid = start(client)
    resp = client.post(f"/sessions/{sid}/translate", json={"text": "qwxz flurb"})
    assert resp.status_code == 422
    body = resp.json()
    assert body["code"] == "translation_failed"
    assert body.get("hint")


def test_translate_in_assessment_mode_409(client):
    sid = start(client, "assessment", difficulty=1)
    resp = client.post(f"/sessions/{sid}/translate", json={"text": "Tracks, please."})
    assert resp.status_code == 409
    assert resp.json()["code"] == "mode_violation"


def test_sql_endpoint(client):
    sid = start(client)
    resp = client.post(f"/sessions/{sid}/sql",
                       json={"sql": "SELECT Track FROM tracks WHERE TrackId = 1479;"})
    assert resp.status_code == 200
    assert resp.json() == {
        "columns": ["Track"],
        "rows": [["Voodoo Child (Slight Return)"]],
    }


def test_sql_syntax_error_400(client):
    sid = start(client)
    resp = client.post(f"/sessions/{sid}/sql", json={"sql": "SELEKT * FROM tracks"})
    assert resp.status_code == 400
    assert resp.json()["code"] == "syntax_error"


def test_answer_flow_and_score(client):
    sid = start(client, "assessment", difficulty=1)
    ok = client.post(f"/sessions/{sid}/answers",
                     json={"assignment_id": "a1", "sql": "SELECT * FROM tracks;"})
    assert ok.status_code == 200
    assert ok.json()["correct"] and ok.json()["earned_points"] == 10

    bad = client.post(f"/sessions/{sid}/answers",
                      json={"assignment_id": "a2", "sql": "SELECT Track FROM tracks;"})
    assert bad.status_code == 200
    assert not bad.json()["correct"]
    assert bad.json()["expected_shown"]

    score = client.get(f"/sessions/{sid}/score")
    assert score.status_code == 200
    body = score.json()
    assert body["earned"] == 10 and body["possible"] == 30
    assert len(body["per_assignment"]) == 3


def test_duplicate_answer_409(client):
    sid = start(client, "assessment", difficulty=1)
    client.post(f"/sessions/{sid}/answers",
                json={"assignment_id": "a1", "sql": "SELECT * FROM tracks;"})
    resp = client.post(f"/sessions/{sid}/answers",
                       json={"assignment_id": "a1", "sql": "SELECT * FROM tracks;"})
    assert resp.status_code == 409
    assert resp.json()["code"] == "duplicate_submission"


def test_unknown_assignment_404(client):
    sid = start(client, "assessment", difficulty=1)
    resp = client.post(f"/sessions/{sid}/answers",
                       json={"assignment_id": "zz", "sql": "SELECT * FROM tracks;"})
    assert resp.status_code == 404
    assert resp.json()["code"] == "unknown_assignment"


def test_unknown_session_404(client):
    resp = client.get("/sessions/deadbeef/score")
    assert resp.status_code == 404
    assert resp.json()["code"] == "unknown_session"
