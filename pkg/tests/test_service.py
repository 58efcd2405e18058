import json

import pytest
from fastapi.testclient import TestClient

from twistcert.curve import QuadField, make_curve
from twistcert.forge import forge
from twistcert.ledger import certificate_to_json
from twistcert.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_classify_endpoint(client):
    r = client.post("/api/classify", json={"curve": {"A": 0, "B": -2}, "D": 5, "bound": 50})
    assert r.status_code == 200
    rows = {row["prime"]: row for row in r.json()["rows"]}
    assert rows["43"]["torsion_dim"] == "2"
    assert rows["43"]["splitting_in_K"] == "Inert"


def test_forge_certificate_matches_library(client):
    r = client.post("/api/forge", json={"curve": {"A": 0, "B": -2}, "D": 5, "r": 0,
                                        "bound": 10**6})
    assert r.status_code == 200
    doc = r.json()["certificate"]
    lib = certificate_to_json(forge(make_curve(0, -2), QuadField(D=5), 0, 10**6))
    assert json.dumps(doc, sort_keys=True, separators=(",", ":")) == lib


def test_forge_with_externals(client):
    r = client.post("/api/forge", json={
        "curve": {"A": 0, "B": -2}, "D": 5, "r": 10, "bound": 10**6,
        "c": 1, "rank_d": 0, "rank_dD": 0,
    })
    assert r.status_code == 200
    derived = r.json()["certificate"]["derived"]
    assert int(derived["sha_K_lower"]) >= 12


def test_verify_round_trip(client):
    cert = client.post("/api/forge", json={"curve": {"A": 0, "B": -2}, "D": 5,
                                           "r": 0, "bound": 10**6}).json()["certificate"]
    ok = client.post("/api/verify", json={"certificate": cert})
    assert ok.status_code == 200 and ok.json()["ok"] is True

    cert["drift_upper"] = "0"
    bad = client.post("/api/verify", json={"certificate": cert})
    assert bad.status_code == 200 and bad.json()["ok"] is False
    assert "drift_upper" in bad.json()["detail"]


def test_verify_malformed_is_422(client):
    r = client.post("/api/verify", json={"certificate": {"schema_version": "1"}})
    assert r.status_code == 422


def test_local_endpoint(client):
    r = client.post("/api/local", json={"curve": {"A": 0, "B": -2}, "q": 43,
                                        "D": 5, "twist_class": "ramified"})
    assert r.status_code == 200
    doc = r.json()
    assert doc["gram_rank"] == "4"
    assert doc["intersection_dim_with_alpha_1"] == "0"


def test_domain_errors_mapped(client):
    # hypothesis failure -> 422
    r = client.post("/api/forge", json={"curve": {"A": 0, "B": -2}, "D": -3, "r": 4})
    assert r.status_code == 422
    # search exhaustion -> 409
    r = client.post("/api/forge", json={"curve": {"A": 0, "B": -2}, "D": 5,
                                        "r": 100, "bound": 50})
    assert r.status_code == 409
    # no full torsion at q -> 422
    r = client.post("/api/local", json={"curve": {"A": 0, "B": -2}, "q": 7})
    assert r.status_code == 422
    # pydantic validation -> 422
    r = client.post("/api/forge", json={"curve": {"A": 0}})
    assert r.status_code == 422


def test_ranks_must_pair(client):
    r = client.post("/api/forge", json={"curve": {"A": 0, "B": -2}, "D": 5,
                                        "r": 0, "rank_d": 0})
    assert r.status_code == 422
