import pytest
from fastapi.testclient import TestClient

from damagesearch.server import create_app


@pytest.fixture
def client(assessed_ctx):
    return TestClient(create_app(assessed_ctx)), assessed_ctx


@pytest.fixture
def cold_client(ctx):
    return TestClient(create_app(ctx)), ctx


def test_health(client):
    http, _ = client
    body = http.get("/health").json()
    assert body["status"] == "ok"
    assert body["properties"] == 20


def test_search_endpoint_flipper_scenario(client):
    http, _ = client
    response = http.get(
        "/properties",
        params={
            "price_min": 0,
            "price_max": 100000,
            "rooms_min": 3,
            "location": "Columbus, OH",
            "damage_mode": "exact",
            "damage_level": "severe",
        },
    )
    assert response.status_code == 200
    body = response.json()
    assert [item["property_id"] for item in body["items"]] == ["P1", "P4", "P18"]
    assert body["total"] == 3
    first = body["items"][0]
    assert first["damage"]["class_id"] == 1
    assert first["damage"]["label"] == "severe"
    assert first["price"] == 15439


def test_extreme_alias_accepted(client):
    http, _ = client
    response = http.get("/properties", params={"damage_level": "Extreme"})
    assert response.status_code == 200
    assert response.json()["total"] == 3


def test_damage_level_as_class_id(client):
    http, _ = client
    response = http.get("/properties", params={"damage_level": "1"})
    assert response.json()["total"] == 3


def test_search_validation_error(client):
    http, _ = client
    response = http.get("/properties", params={"price_min": 10, "price_max": 5})
    assert response.status_code == 400
    assert response.json()["error"] == "validation"
    response = http.get("/properties", params={"damage_mode": "exact"})
    assert response.status_code == 400
    response = http.get("/properties", params={"damage_level": "purple"})
    assert response.status_code == 400


def test_property_detail(client):
    http, _ = client
    body = http.get("/properties/P4").json()
    assert body["criteria"]["price"] == 54000
    assert body["damage"]["label"] == "severe"
    assert body["image_ids"] == ["P4-img1"]
    assert http.get("/properties/nope").status_code == 404


def test_damage_detail_endpoint(client):
    http, _ = client
    body = http.get("/properties/P7/damage").json()
    assert body["bucket"] == {"class_id": 2, "label": "mild"}
    assert round(body["score"], 4) == 2.4559
    sections = {img["section_kind"] for img in body["images"]}
    assert sections == {"kitchen", "bedroom"}
    detections = [d for img in body["images"] for d in img["detections"]]
    labels = sorted(d["label"] for d in detections)
    assert labels == ["minor", "severe"]
    assert all(d["confidence"] >= 0.85 for d in detections)


def test_damage_detail_pending_409(cold_client):
    http, ctx = cold_client
    response = http.get("/properties/P4/damage")
    assert response.status_code == 409
    body = response.json()
    assert body["error"] == "assessment-pending"
    assert body["task_ids"]
    assert ctx.scheduler.pending_count() >= 1


def test_rank_endpoint(client):
    http, _ = client
    params = {"price_min": 0, "price_max": 100000, "rooms_min": 3, "location": "Columbus, OH"}
    assert http.get("/properties/P4/rank", params=params).json()["rank"] == 17
    filtered = dict(params, damage_mode="exact", damage_level="severe")
    assert http.get("/properties/P4/rank", params=filtered).json()["rank"] == 2
    miss = dict(params, damage_mode="exact", damage_level="none")
    assert http.get("/properties/P4/rank", params=miss).status_code == 404


def test_import_property_and_image(cold_client):
    http, ctx = cold_client
    response = http.post(
        "/properties",
        json={
            "property_id": "P99",
            "address": "9 New St, Columbus, OH 43299",
            "zip_code": "43299",
            "criteria": {"price": 61500, "rooms": 3, "location": "Columbus, OH"},
        },
    )
    assert response.status_code == 201
    assert ctx.store.get_property("P99").criteria["price"] == 61500

    response = http.post(
        "/properties/P99/images",
        json={
            "image_id": "P99-img1",
            "file_path": "images/P99-img1.jpg",
            "width": 712,
            "height": 712,
            "ppi": 96.0,
        },
    )
    assert response.status_code == 201
    assert [m.image_id for m in ctx.store.list_undetected_images("P99")] == ["P99-img1"]

    assert http.post("/properties", json={"address": "no id"}).status_code == 400
    bad_criteria = {"property_id": "X", "criteria": {"mystery": 1}}
    assert http.post("/properties", json=bad_criteria).status_code == 400


def test_admin_detect_enqueues_at_operator_priority(cold_client):
    http, ctx = cold_client
    response = http.post("/admin/detect/P4")
    assert response.status_code == 202
    task_ids = response.json()["task_ids"]
    assert len(task_ids) == 1
    assert ctx.scheduler.tasks[task_ids[0]].priority == 20
    assert http.post("/admin/detect/ghost").status_code == 404
