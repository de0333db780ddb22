import json

import pytest
from fastapi.testclient import TestClient

from timecrit import DecisionService
from timecrit.httpapi import create_app


@pytest.fixture
def client(hemorrhage_doc):
    service = DecisionService()
    service.load_model(hemorrhage_doc)
    app = create_app(service)
    return TestClient(app)


@pytest.fixture
def session_id(client, hemorrhage_doc) -> str:
    mid = next(iter(client.app.state.service.models()))
    resp = client.post("/sessions", json={"model": mid})
    assert resp.status_code == 200
    return resp.json()["id"]


def model_id(client) -> str:
    return next(iter(client.app.state.service.models()))


class TestModels:
    def test_post_model_returns_id(self, client, hemorrhage_doc):
        resp = client.post("/models", json=hemorrhage_doc)
        assert resp.status_code == 200
        assert resp.json()["id"]

    def test_invalid_model_is_400_with_error_shape(self, client, hemorrhage_doc):
        hemorrhage_doc["cpts"]["bleed"] = [0.9, 0.9]
        resp = client.post("/models", json=hemorrhage_doc)
        assert resp.status_code == 400
        body = resp.json()
        assert set(body) == {"code", "message", "path"}
        assert body["code"] == "validation_error"

    def test_unparseable_body_is_400(self, client):
        resp = client.post(
            "/models", content=b"{nope", headers={"content-type": "application/json"}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "parse_error"


class TestSessions:
    def test_create_and_post_finding(self, client, session_id):
        resp = client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "hypotension", "state": "present", "timestamp": 0.0},
        )
        assert resp.status_code == 200
        body = resp.json()
        hyp = body["hypotheses"][0]
        weights = dict(zip(hyp["posterior"]["states"], hyp["posterior"]["weights"]))
        assert weights["hemorrhage"] == pytest.approx(27.0 / 34.0, abs=1e-9)
        assert body["evidence"] == [["hypotension", "present", 0.0]]

    def test_unknown_session_is_404(self, client):
        resp = client.get("/sessions/ghost/assessment", params={"now": 0})
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"

    def test_unknown_model_on_create_is_404(self, client):
        resp = client.post("/sessions", json={"model": "ghost"})
        assert resp.status_code == 404

    def test_bad_state_is_400(self, client, session_id):
        resp = client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "hypotension", "state": "sideways", "timestamp": 0.0},
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid_input"

    def test_missing_field_reports_path(self, client, session_id):
        resp = client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "hypotension", "timestamp": 0.0},
        )
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "invalid_input"
        assert "state" in body["path"]

    def test_timestamp_regression_is_400(self, client, session_id):
        url = f"/sessions/{session_id}/findings"
        client.post(url, json={"variable": "hypotension", "state": "present",
                               "timestamp": 10.0})
        resp = client.post(url, json={"variable": "distension", "state": "present",
                                      "timestamp": 5.0})
        assert resp.status_code == 400

    def test_session_with_onset_and_origin(self, client):
        resp = client.post(
            "/sessions",
            json={"model": model_id(client),
                  "onset": {"support": [[0, 0.5], [30, 0.5]]},
                  "origin": 2.0},
        )
        assert resp.status_code == 200


class TestAssessment:
    def test_default_grid(self, client, session_id):
        resp = client.get(f"/sessions/{session_id}/assessment", params={"now": 0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["grid"] == [0, 5, 10, 15, 30, 60, 120]
        hyp = body["hypotheses"][0]
        assert hyp["best_action"] == "observe"
        assert {"variable", "posterior", "best_action", "expected_utility",
                "ecda", "criticality", "comprehensive_ecda", "voi"} <= set(hyp)

    def test_grid_query_parsing(self, client, session_id):
        resp = client.get(
            f"/sessions/{session_id}/assessment",
            params={"now": 30, "grid": "0,10,20"},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["grid"] == [0.0, 10.0, 20.0]
        assert [pt[0] for pt in body["hypotheses"][0]["ecda"]] == [0.0, 10.0, 20.0]

    def test_malformed_grid_is_400(self, client, session_id):
        resp = client.get(
            f"/sessions/{session_id}/assessment",
            params={"now": 0, "grid": "0,banana"},
        )
        assert resp.status_code == 400

    def test_voi_entries_sorted(self, client, session_id):
        resp = client.get(f"/sessions/{session_id}/assessment", params={"now": 30})
        voi = resp.json()["hypotheses"][0]["voi"]
        assert [e["variable"] for e in voi["entries"]] == ["hypotension", "distension"]
        evis = [e["evi"] for e in voi["entries"]]
        assert evis == sorted(evis, reverse=True)


class TestLoadAndGo:
    def test_endpoint(self, client, session_id):
        client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "hypotension", "state": "present", "timestamp": 0.0},
        )
        resp = client.post(
            f"/sessions/{session_id}/load-and-go",
            json={
                "treatment": {
                    "name": "dressing",
                    "admin_time": 5.0,
                    "removed": {
                        "hemorrhage": {"kind": "constant", "minutes": 20.0},
                        "stable": {"kind": "constant", "minutes": 0.0},
                    },
                },
                "t": 30.0,
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["recommendation"] == "treat_locally"
        assert body["ecda_with_treatment"] == pytest.approx(22.64, abs=1e-2)
        assert body["ecda_load_and_go"] == pytest.approx(37.89, abs=1e-2)

    def test_bad_treatment_is_400(self, client, session_id):
        resp = client.post(
            f"/sessions/{session_id}/load-and-go",
            json={"treatment": {"name": "x"}, "t": 30.0},
        )
        assert resp.status_code == 400
        assert "admin_time" in resp.json()["path"]


class TestScenarios:
    def test_evaluate_returns_ascending_plans(self, client, scenario_doc):
        resp = client.post("/scenarios/evaluate", json=scenario_doc)
        assert resp.status_code == 200
        plans = resp.json()["plans"]
        assert len(plans) == 2
        totals = [p["total"] for p in plans]
        assert totals == sorted(totals)
        assert totals[0] == pytest.approx(38.11, abs=1e-2)
        first = plans[0]
        assert first["trips"] == {"medic1": [["A", "hospital"], ["B", "hospital"]]}
        assert first["arrivals"]["A"]["support"] == [[10.0, 1.0]]
        assert first["per_patient"]["A"] == pytest.approx(17.566, abs=1e-2)

    def test_infeasible_is_400(self, client, scenario_doc):
        scenario_doc["patients"][0]["requires"] = ["burns"]
        resp = client.post("/scenarios/evaluate", json=scenario_doc)
        assert resp.status_code == 400
        assert resp.json()["code"] == "infeasible_scenario"


class TestPersistence:
    def test_export_import_round_trip(self, client, session_id):
        client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "hypotension", "state": "present", "timestamp": 3.0},
        )
        exported = client.get(f"/sessions/{session_id}/export")
        assert exported.status_code == 200
        assert exported.headers["content-type"].startswith("application/json")
        doc = json.loads(exported.content)
        assert doc["kind"] == "timecrit-session"

        imported = client.post("/sessions/import", content=exported.content)
        assert imported.status_code == 200
        new_id = imported.json()["id"]
        assert new_id != session_id

        a = client.get(f"/sessions/{session_id}/assessment", params={"now": 30}).json()
        b = client.get(f"/sessions/{new_id}/assessment", params={"now": 30}).json()
        a.pop("session"), b.pop("session")
        assert a == b

    def test_import_truncated_is_400(self, client, session_id):
        exported = client.get(f"/sessions/{session_id}/export").content
        resp = client.post("/sessions/import", content=exported[: len(exported) // 2])
        assert resp.status_code == 400
        assert resp.json()["code"] == "parse_error"


class TestReplayStability:
    def test_identical_requests_identical_bodies(self, client, session_id):
        client.post(
            f"/sessions/{session_id}/findings",
            json={"variable": "distension", "state": "present", "timestamp": 0.0},
        )
        url = f"/sessions/{session_id}/assessment"
        first = client.get(url, params={"now": 15, "grid": "0,5,30"})
        second = client.get(url, params={"now": 15, "grid": "0,5,30"})
        assert first.content == second.content
