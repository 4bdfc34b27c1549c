import inspect

import pytest
from fastapi.testclient import TestClient

from project.server import app


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def test_practical(client):
    response = client.get("/practical/75", params={"f": "phi"})
    assert response.status_code == 200
    body = response.json()
    assert body["is_practical"] is False
    assert body["witness"] == 16


def test_practical_parametrised(client):
    response = client.get("/practical/10", params={"f": "fn", "param": 2})
    assert response.status_code == 200
    assert response.json()["is_practical"] is True


@pytest.mark.parametrize(
    "path, params",
    [
        ("/practical/0", {}),
        ("/practical/5", {"f": "nope"}),
        ("/practical/5", {"f": "fn"}),
        ("/verify/no-such-suite", {}),
        ("/census", {"x": 10**6 + 1, "f": "lambda-def53"}),
        ("/nonconstructible", {"x": 10**6}),
    ],
)
def test_invalid_input_is_400(client, path, params):
    response = client.get(path, params=params)
    assert response.status_code == 400
    assert "error" in response.json()


def test_target_not_found_is_422(client):
    response = client.get("/density/target", params={"alpha": "0.9", "search_bound": 1000})
    assert response.status_code == 422
    assert "no m <= 1000" in response.json()["error"]


def test_weak(client):
    response = client.get("/weak/75")
    assert response.status_code == 200
    assert [step["prime"] for step in response.json()["steps"]] == [3, 5]


def test_census(client):
    response = client.get("/census", params={"x": 1000, "f": "lambda-star"})
    assert response.status_code == 200
    checkpoint = response.json()["checkpoints"][0]
    assert checkpoint["count"] == 164
    assert checkpoint["ratio"] == pytest.approx(1.132872)


def test_density(client):
    estimate = client.get("/density/estimate", params={"x": 1000}).json()
    assert estimate["count"] == 501
    assert estimate["target_exact"] == "1/2"
    target = client.get("/density/target", params={"alpha": "0.5"}).json()
    assert target["n"] == 2


def test_scans(client):
    tau = client.get("/scan/every-integer", params={"f": "tau", "p_max": 20, "k_max": 5})
    assert tau.json()["holds"] is True
    phi = client.get("/scan/convenience", params={"f": "phi"})
    assert phi.json()["counterexample"]["p"] == 2


def test_verify(client):
    response = client.get("/verify/lambda-156")
    assert response.status_code == 200
    assert response.json()["passed"] is True


def test_nonconstructible(client):
    body = client.get("/nonconstructible", params={"x": 1000}).json()
    assert 315 in body["found"]
    assert body["function"] == "phi"


_COMPUTE_PREFIXES = (
    "/practical",
    "/weak",
    "/census",
    "/density",
    "/scan",
    "/verify",
    "/nonconstructible",
)


def test_compute_endpoints_are_sync():
    routes = [r for r in app.routes if r.path.startswith(_COMPUTE_PREFIXES)]
    assert len(routes) == 9
    for route in routes:
        assert not inspect.iscoroutinefunction(route.endpoint), route.path
