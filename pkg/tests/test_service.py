"""HTTP API: upload, scope management, enrichment, graph retrieval."""
from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from procscope.lang import parse_ruleset, ruleset_to_json
from procscope.model import is_pocel
from procscope.ocel_json import export_json, import_json
from procscope.service import create_app

from conftest import make_sample_a


def scope_payload(*pairs: tuple[str, str]) -> list[dict]:
    return [
        {"name": name, "ruleset": json.loads(ruleset_to_json(parse_ruleset(text)))}
        for name, text in pairs
    ]


@pytest.fixture
def client():
    return TestClient(create_app(max_upload_mb=1))


@pytest.fixture
def uploaded(client):
    response = client.post("/api/v1/logs", content=export_json(make_sample_a()))
    assert response.status_code == 200
    return client, response.json()["log_id"]


def test_upload_returns_stats_and_registries(client):
    response = client.post("/api/v1/logs", content=export_json(make_sample_a()))
    body = response.json()
    assert body["stats"] == {"events": 5, "objects": 3, "e2o": 8, "o2o": 0}
    assert body["object_types"]["item"] == {"weight": "number"}
    assert set(body["event_types"]) == {"place", "pick", "ship"}


def test_upload_truncated_json_is_400(client):
    response = client.post("/api/v1/logs", content='{"objectTypes": [')
    assert response.status_code == 400
    assert response.json()["error"] == "parse-error"


def test_upload_over_limit_is_413(client):
    blob = b" " * (1024 * 1024 + 1)
    assert client.post("/api/v1/logs", content=blob).status_code == 413


def test_two_uploads_get_distinct_ids(client):
    doc = export_json(make_sample_a())
    first = client.post("/api/v1/logs", content=doc).json()["log_id"]
    second = client.post("/api/v1/logs", content=doc).json()["log_id"]
    assert first != second


def test_unknown_log_is_404(client):
    assert client.post("/api/v1/logs/nope/enrich").status_code == 404
    assert client.get("/api/v1/logs/nope/pocel").status_code == 404


def test_scopes_validation_failure_is_422(uploaded):
    client, log_id = uploaded
    bad = scope_payload(("P1", "INCLUDE {(orders)}"))
    response = client.put(f"/api/v1/logs/{log_id}/scopes", json=bad)
    assert response.status_code == 422
    (scope,) = response.json()["scopes"]
    assert scope["violations"][0]["code"] == "unknown-entity"


def test_scopes_schema_error_is_422(uploaded):
    client, log_id = uploaded
    response = client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=[{"name": "P1", "ruleset": {"op": "xor"}}],
    )
    assert response.status_code == 422


def test_graph_before_enrich_is_409(uploaded):
    client, log_id = uploaded
    client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=scope_payload(("P1", "INCLUDE {(order)}")),
    )
    assert client.get(f"/api/v1/logs/{log_id}/graph").status_code == 409
    assert client.get(f"/api/v1/logs/{log_id}/pocel").status_code == 409


def test_full_flow_matches_cli_summaries(uploaded):
    client, log_id = uploaded
    put = client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=scope_payload(("P1", "INCLUDE {(order)}"), ("P2", "INCLUDE {(ship)}")),
    )
    assert put.status_code == 200
    enrich = client.post(f"/api/v1/logs/{log_id}/enrich")
    assert enrich.status_code == 200
    assert enrich.json()["scopes"] == [
        {"name": "P1", "events": 3, "objects": 1},
        {"name": "P2", "events": 1, "objects": 2},
    ]

    pocel = client.get(f"/api/v1/logs/{log_id}/pocel")
    assert is_pocel(import_json(pocel.content)).is_pocel

    graph = client.get(f"/api/v1/logs/{log_id}/graph").json()
    assert graph["edges"][0]["shared_object_count"] == 2
    assert graph["settings"]["edge_label"] == "shared_objects"

    dot = client.get(f"/api/v1/logs/{log_id}/graph.dot?edge_label=object_types")
    assert '[label="item"];' in dot.text

    vos = client.get(f"/api/v1/logs/{log_id}/graph.vos").json()
    assert vos["network"]["links"][0]["strength"] == 2


def test_re_enrich_is_byte_identical(uploaded):
    client, log_id = uploaded
    client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=scope_payload(("P1", "INCLUDE {(order)}")),
    )
    client.post(f"/api/v1/logs/{log_id}/enrich")
    first = client.get(f"/api/v1/logs/{log_id}/pocel").content
    client.post(f"/api/v1/logs/{log_id}/enrich")
    second = client.get(f"/api/v1/logs/{log_id}/pocel").content
    assert first == second


def test_failing_enrichment_is_422(uploaded):
    client, log_id = uploaded
    client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=scope_payload(("P", "(INCLUDE {(pick)} AND INCLUDE {(ship)})")),
    )
    response = client.post(f"/api/v1/logs/{log_id}/enrich")
    assert response.status_code == 422
    assert response.json()["error"] == "empty-scope"


def test_bad_graph_settings_is_422(uploaded):
    client, log_id = uploaded
    client.put(
        f"/api/v1/logs/{log_id}/scopes",
        json=scope_payload(("P1", "INCLUDE {(order)}")),
    )
    client.post(f"/api/v1/logs/{log_id}/enrich")
    assert client.get(f"/api/v1/logs/{log_id}/graph?edge_label=rainbow").status_code == 422


def test_session_eviction_by_capacity():
    client = TestClient(create_app(max_sessions=2))
    doc = export_json(make_sample_a())
    ids = [client.post("/api/v1/logs", content=doc).json()["log_id"] for _ in range(3)]
    alive = [
        client.put(f"/api/v1/logs/{log_id}/scopes", json=[]).status_code != 404
        for log_id in ids
    ]
    assert alive.count(True) <= 2
    assert not alive[0]
