from __future__ import annotations

import json
import threading

import pytest
from fastapi.testclient import TestClient

import ndpolar as nd
from ndpolar.model import iter_slices, matrix_slice
from ndpolar.service import ApiSession, create_app


@pytest.fixture()
def client():
    model = nd.load_model(nd.fixture_path("cooling"))
    return TestClient(create_app(ApiSession(model)))


class TestModelEndpoint:
    def test_get_model(self, client):
        body = client.get("/api/model").json()
        assert body["revision"] == 1
        assert body["document"]["format"] == "ndpolar/1"

    def test_put_valid_bumps_revision(self, client):
        doc = client.get("/api/model").json()["document"]
        doc["name"] = "replaced"
        r = client.put("/api/model", json=doc)
        assert r.status_code == 200
        assert r.json()["revision"] == 2
        body = client.get("/api/model").json()
        assert body["revision"] == 2
        assert body["document"]["name"] == "replaced"

    def test_put_invalid_keeps_old_model(self, client):
        doc = client.get("/api/model").json()["document"]
        bad = dict(doc)
        bad["assignment"] = {"entries": [{"state": [0, 0, 0, 0], "grade": "green"}]}
        r = client.put("/api/model", json=bad)
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "E_NOT_TOTAL"
        body = client.get("/api/model").json()
        assert body["revision"] == 1
        assert body["document"]["name"] == doc["name"]

    def test_put_bad_json_is_400(self, client):
        r = client.put("/api/model", content=b"{nope")
        assert r.status_code == 400


class TestSliceEndpoint:
    def test_matches_library(self, client):
        model = nd.load_model(nd.fixture_path("cooling"))
        for sigma in iter_slices(model.space):
            query = "&".join(f"{a}={v}" for a, v in sigma.items())
            body = client.get(f"/api/slice?{query}").json()
            expected = matrix_slice(model, sigma)
            assert body["grid"] == [list(col) for col in expected.grid]
            assert body["revision"] == 1

    def test_labels_accepted(self, client):
        a = client.get("/api/slice?cooling=N%2B1&maintenance=due").json()
        b = client.get("/api/slice?cooling=1&maintenance=1").json()
        assert a["grid"] == b["grid"]

    def test_default_slice_fills_missing(self, client):
        a = client.get("/api/slice").json()
        b = client.get("/api/slice?cooling=1&maintenance=0").json()
        assert a["grid"] == b["grid"]

    def test_unknown_axis_404(self, client):
        r = client.get("/api/slice?bogus=1")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "E_UNKNOWN_AXIS"

    def test_unknown_label_404(self, client):
        r = client.get("/api/slice?cooling=NX&maintenance=0")
        assert r.status_code == 404

    def test_out_of_range_404(self, client):
        r = client.get("/api/slice?cooling=9&maintenance=0")
        assert r.status_code == 404

    def test_primary_axis_in_sigma_400(self, client):
        r = client.get("/api/slice?probability=1&cooling=1&maintenance=0")
        assert r.status_code == 400


class TestComputeEndpoints:
    def test_aggregate(self, client):
        body = client.get("/api/aggregate?cooling=1&maintenance=0&risk=2,2").json()
        assert body["risk_grade"] == "light-green"
        assert body["likelihood"][0] == "light-green"
        assert body["impact"][4] == "orange"

    def test_aggregate_risk_defaults_to_model(self, client):
        body = client.get("/api/aggregate?cooling=1&maintenance=0").json()
        assert body["risk"] == {"likelihood": 2, "impact": 2}

    def test_walk(self, client):
        body = client.get(
            "/api/walk?vary=maintenance&cooling=1&risk=Medium,Medium"
        ).json()
        assert [s["risk_grade"] for s in body["steps"]] == [
            "light-green", "orange", "orange",
        ]
        assert [s["violations"] for s in body["steps"]] == [0, 0, 1]

    def test_walk_missing_vary_400(self, client):
        assert client.get("/api/walk?cooling=1").status_code == 400

    def test_violations(self, client):
        body = client.get("/api/violations?state=2,2,1,2").json()
        assert body["v"] == [0, 0, 0, 1]
        assert body["V"] == 1

    def test_violations_labels(self, client):
        body = client.get(
            "/api/violations?state=Medium,Medium,N%2B1,overdue"
        ).json()
        assert body["V"] == 1

    def test_violations_wrong_arity_400(self, client):
        assert client.get("/api/violations?state=1,2").status_code == 400

    def test_layout(self, client):
        body = client.get("/api/layout").json()
        assert body["d"] == 4
        assert len(body["sectors"]) == 4
        assert [len(r) for r in body["rings"]] == [5, 5, 4, 3]
        radii = {a["axis"]: a["radius"] for a in body["threshold_arcs"]}
        assert radii["probability"] == pytest.approx(3 / 5)

    def test_idempotent_reads(self, client):
        a = client.get("/api/slice?cooling=1&maintenance=0")
        b = client.get("/api/slice?cooling=1&maintenance=0")
        assert a.content == b.content


class TestRenderEndpoints:
    def test_polar_svg(self, client):
        r = client.get("/api/render/polar.svg?cooling=1&maintenance=0")
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("image/svg+xml")
        assert r.headers["x-model-revision"] == "1"
        assert r.text.count('class="segment"') == 17

    def test_matrix_svg(self, client):
        r = client.get("/api/render/matrix.svg?cooling=1&maintenance=0&risk=2,2")
        assert r.text.count('class="cell"') == 25

    def test_equal_to_cli_render(self, client):
        from ndpolar.render import render_polar

        model = nd.load_model(nd.fixture_path("cooling"))
        expected = render_polar(model, {"cooling": 1, "maintenance": 0})
        got = client.get("/api/render/polar.svg?cooling=1&maintenance=0").text
        assert got == expected


class TestAtomicReplace:
    def test_concurrent_readers_see_whole_models(self):
        model = nd.load_model(nd.fixture_path("basic2d"))
        session = ApiSession(model)
        app = create_app(session)
        client = TestClient(app)
        base = client.get("/api/model").json()["document"]

        variants = []
        for grade in ("green", "yellow", "orange", "red"):
            doc = json.loads(json.dumps(base))
            doc["name"] = f"variant-{grade}"
            doc["assignment"] = {"default": grade}
            variants.append(doc)

        stop = threading.Event()
        failures: list[str] = []

        def writer():
            i = 0
            while not stop.is_set():
                session.replace(variants[i % len(variants)])
                i += 1

        def reader():
            while not stop.is_set():
                body = client.get("/api/slice").json()
                cells = {g for col in body["grid"] for g in col}
                if len(cells) != 1:  # every variant is a constant map
                    failures.append(f"mixed grid: {cells}")

        threads = [threading.Thread(target=writer)] + [
            threading.Thread(target=reader) for _ in range(3)
        ]
        for t in threads:
            t.start()
        threading.Event().wait(0.5)
        stop.set()
        for t in threads:
            t.join()
        assert failures == []

    def test_revision_monotone(self, client):
        doc = client.get("/api/model").json()["document"]
        revs = []
        for i in range(3):
            doc["name"] = f"rev-{i}"
            revs.append(client.put("/api/model", json=doc).json()["revision"])
        assert revs == [2, 3, 4]


class TestIndex:
    def test_index_without_ui(self, client):
        body = client.get("/").json()
        assert "/api/slice" in body["endpoints"]

    def test_ui_dir_served(self, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>ui</body></html>")
        model = nd.load_model(nd.fixture_path("basic2d"))
        client = TestClient(create_app(ApiSession(model), ui_dir=str(tmp_path)))
        r = client.get("/")
        assert r.status_code == 200
        assert "ui" in r.text
        # API still wins over static mounting
        assert client.get("/api/model").status_code == 200
