import threading
import time
import xml.dom.minidom

import numpy as np
import pytest
from fastapi.testclient import TestClient

from simforge.service import RegistryError, ServiceConfig, SimulationRegistry, create_app

from conftest import CORPUS


@pytest.fixture(scope="module")
def client():
    app = create_app(ServiceConfig(simulations_dir=CORPUS))
    with TestClient(app) as c:
        yield c


def _create(client, doc_id="pendulum", **body):
    response = client.post(f"/api/simulations/{doc_id}/sessions", json=body or {})
    assert response.status_code == 201
    return response.json()


class TestConfig:
    def test_file_then_env_precedence(self, tmp_path):
        config_file = tmp_path / "simforge.json"
        config_file.write_text(
            '{"listen": "0.0.0.0:9100", "sessionTtlSeconds": 60}'
        )
        config = ServiceConfig.load(CORPUS, config_file=config_file, env={})
        assert (config.host, config.port) == ("0.0.0.0", 9100)
        assert config.session_ttl == 60.0

        config = ServiceConfig.load(
            CORPUS,
            config_file=config_file,
            env={"SIMFORGE_LISTEN": "127.0.0.1:9200", "SIMFORGE_SESSION_TTL": "5"},
        )
        assert config.port == 9200
        assert config.session_ttl == 5.0

    def test_defaults_without_file(self):
        config = ServiceConfig.load(CORPUS, env={})
        assert config.port == 8000 and config.session_ttl == 1800.0
        assert config.simulations_dir == CORPUS


class TestRegistry:
    def test_all_corpus_docs_load(self):
        registry = SimulationRegistry(CORPUS)
        assert "pendulum" in registry.entries
        assert len(registry.entries) == 9

    def test_invalid_document_fails_startup(self, tmp_path):
        (tmp_path / "broken.xml").write_text("<simulation>")
        with pytest.raises(RegistryError, match="broken"):
            SimulationRegistry(tmp_path)

    def test_ir_cache_shared(self):
        registry = SimulationRegistry(CORPUS)
        first = registry.compiled("pendulum", None)
        second = registry.compiled("pendulum", None)
        assert first[0] is second[0]


class TestEndpoints:
    def test_list_simulations(self, client):
        response = client.get("/api/simulations")
        assert response.status_code == 200
        listing = {entry["docId"]: entry for entry in response.json()}
        assert listing["pendulum"]["title"] == "Pendulum"
        assert listing["pendulum"]["languages"] == ["french"]
        assert "physics" in listing["pendulum"]["keywords"]

    def test_create_session_runs_defaults(self, client):
        data = _create(client)
        assert data["runCounter"] == 1
        titles = [p["title"] for p in data["uiForm"]["pages"]]
        assert "Resolution parameters" in titles
        assert len(data["result"]["series"]["theta"]["y"]) == 200

    def test_create_unknown_doc(self, client):
        response = client.post("/api/simulations/nope/sessions", json={})
        assert response.status_code == 404

    def test_patch_changes_series_and_counter(self, client):
        data = _create(client)
        sid = data["sessionId"]
        before = data["result"]["series"]["theta"]["y"]
        response = client.patch(f"/api/sessions/{sid}/params", json={"theta_0": 1.0})
        assert response.status_code == 200
        payload = response.json()
        assert payload["runCounter"] == 2
        after = payload["result"]["series"]["theta"]["y"]
        assert max(abs(a - b) for a, b in zip(before, after)) > 0

    def test_patch_unknown_symbol(self, client):
        sid = _create(client)["sessionId"]
        response = client.patch(f"/api/sessions/{sid}/params", json={"nope": 1})
        assert response.status_code == 400

    def test_patch_empty_body(self, client):
        sid = _create(client)["sessionId"]
        response = client.patch(f"/api/sessions/{sid}/params", json={})
        assert response.status_code == 400

    def test_patch_clamps_with_warning(self, client):
        sid = _create(client)["sessionId"]
        response = client.patch(f"/api/sessions/{sid}/params", json={"tf": 99})
        assert response.status_code == 200
        assert any("clamped" in w for w in response.json()["warnings"])

    def test_point_projection(self, client):
        sid = _create(client)["sessionId"]
        response = client.post(
            f"/api/sessions/{sid}/point/point0", json={"x": 0.7, "y": 1.2}
        )
        assert response.status_code == 200
        assert response.json()["point"] == {"x": 0.0, "y": 1.2}

    def test_point_clamped_to_constraint_range(self, client):
        sid = _create(client)["sessionId"]
        response = client.post(
            f"/api/sessions/{sid}/point/point0", json={"x": 0.3, "y": 5.0}
        )
        assert response.json()["point"] == {"x": 0.0, "y": 3.14}

    def test_point_unknown_label(self, client):
        sid = _create(client)["sessionId"]
        response = client.post(f"/api/sessions/{sid}/point/nope", json={"x": 0, "y": 0})
        assert response.status_code == 400

    def test_plot_svg(self, client):
        sid = _create(client)["sessionId"]
        response = client.get(f"/api/sessions/{sid}/plot/0.svg")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("image/svg+xml")
        xml.dom.minidom.parseString(response.text)

    def test_plot_unknown_session_404(self, client):
        response = client.get("/api/sessions/deadbeef/plot/0.svg")
        assert response.status_code == 404

    def test_plot_window_out_of_range(self, client):
        sid = _create(client)["sessionId"]
        response = client.get(f"/api/sessions/{sid}/plot/5.svg")
        assert response.status_code == 404

    def test_csv_export(self, client):
        sid = _create(client)["sessionId"]
        response = client.get(f"/api/sessions/{sid}/export.csv")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/csv")
        header = response.text.splitlines()[0]
        assert header == "t,theta,theta_dot,theta_lin"

    def test_session_file_roundtrip(self, client):
        data = _create(client)
        sid = data["sessionId"]
        client.patch(f"/api/sessions/{sid}/params", json={"theta_0": 1.5})
        saved = client.get(f"/api/sessions/{sid}/session-file")
        assert saved.status_code == 200
        assert "theta_0 = 1.5" in saved.text

        client.patch(f"/api/sessions/{sid}/params", json={"theta_0": 0.5})
        restored = client.put(f"/api/sessions/{sid}/session-file", content=saved.text)
        assert restored.status_code == 200
        again = client.get(f"/api/sessions/{sid}/session-file")
        assert again.text == saved.text

    def test_session_file_for_other_doc_rejected(self, client):
        sid = _create(client)["sessionId"]
        response = client.put(
            f"/api/sessions/{sid}/session-file",
            content="!session version=1 doc=other\ntf = 1\n",
        )
        assert response.status_code == 400

    def test_language_switch_keeps_values(self, client):
        sid = _create(client)["sessionId"]
        client.patch(f"/api/sessions/{sid}/params", json={"tf": 7.0})
        response = client.post(
            f"/api/sessions/{sid}/language", json={"language": "french"}
        )
        assert response.status_code == 200
        titles = [p["title"] for p in response.json()["uiForm"]["pages"]]
        assert "Paramètres de résolution" in titles
        saved = client.get(f"/api/sessions/{sid}/session-file")
        assert "tf = 7" in saved.text

    def test_delete_then_404(self, client):
        sid = _create(client)["sessionId"]
        assert client.delete(f"/api/sessions/{sid}").status_code == 204
        assert client.delete(f"/api/sessions/{sid}").status_code == 404
        assert client.get(f"/api/sessions/{sid}/export.csv").status_code == 404

    def test_body_size_cap(self, client):
        sid = _create(client)["sessionId"]
        big = b"x" * (1 << 21)
        response = client.put(f"/api/sessions/{sid}/session-file", content=big)
        assert response.status_code == 413

    def test_run_counter_monotonic(self, client):
        sid = _create(client)["sessionId"]
        counters = []
        for value in (0.5, 1.0, 1.5):
            response = client.patch(
                f"/api/sessions/{sid}/params", json={"theta_0": value}
            )
            counters.append(response.json()["runCounter"])
        assert counters == sorted(counters)
        assert len(set(counters)) == len(counters)


class TestIsolationAndExpiry:
    def test_sessions_are_isolated(self, client):
        a = _create(client)["sessionId"]
        b = _create(client)["sessionId"]
        client.patch(f"/api/sessions/{a}/params", json={"theta_0": 1.0})
        client.patch(f"/api/sessions/{b}/params", json={"theta_0": 2.5})
        client.patch(f"/api/sessions/{a}/params", json={"tf": 3.0})

        file_a = client.get(f"/api/sessions/{a}/session-file").text
        file_b = client.get(f"/api/sessions/{b}/session-file").text
        assert "theta_0 = 1" in file_a and "tf = 3" in file_a
        assert "theta_0 = 2.5" in file_b and "tf = 2" in file_b

    def test_expired_session_answers_410(self):
        app = create_app(
            ServiceConfig(simulations_dir=CORPUS, session_ttl=0.05)
        )
        with TestClient(app) as client:
            sid = _create(client)["sessionId"]
            time.sleep(0.12)
            response = client.get(f"/api/sessions/{sid}/export.csv")
            assert response.status_code == 410
            # reclaimed: the id no longer exists
            response = client.get(f"/api/sessions/{sid}/export.csv")
            assert response.status_code == 404

    def test_concurrent_patches_serialized(self, client):
        sid = _create(client)["sessionId"]
        errors: list = []

        def worker(value: float):
            try:
                response = client.patch(
                    f"/api/sessions/{sid}/params", json={"theta_0": value}
                )
                assert response.status_code == 200
            except Exception as exc:  # pragma: no cover - surfaced below
                errors.append(exc)

        threads = [
            threading.Thread(target=worker, args=(0.1 * k,)) for k in range(1, 9)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert errors == []
        # last writer wins: the final valuation is one of the requested ones
        saved = client.get(f"/api/sessions/{sid}/session-file").text
        theta_line = next(l for l in saved.splitlines() if l.startswith("theta_0"))
        value = float(theta_line.split("=")[1])
        assert any(abs(value - 0.1 * k) < 1e-12 for k in range(1, 9))
        response = client.patch(f"/api/sessions/{sid}/params", json={"theta_0": 0.7})
        assert response.json()["runCounter"] == 10  # create + 8 patches + this one
