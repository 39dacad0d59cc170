"""Service API: endpoints, error mapping, jobs, persistence, golden run."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from enerscape.climate import SimulationParams, annual_energy, sample_dataset
from enerscape.content import default_content_path, load_content_pack
from enerscape.jobs import load_script, run_script
from enerscape.quest import GameEngine, load_scenario
from enerscape.service import ServiceConfig, create_app
from enerscape.surrogate import fit, predict

PACK = load_content_pack()
DATA = default_content_path().parent
ESCAPE = load_scenario(DATA / "scenario_escape_room.json")
TUTORIAL = load_scenario(DATA / "scenario_tutorial.json")
GOLDEN_ACTIONS = load_script(DATA / "golden_playthrough.txt")


@pytest.fixture(scope="module")
def model():
    rows = sample_dataset(600, seed=5, climate=PACK.climate, room=PACK.room,
                          bands=PACK.rating_bands)
    return fit(rows, 1e-3, seed=5, rating_bands=PACK.rating_bands,
               content_pack_hash=PACK.sha256)


def make_app(tmp_path, model=None, use_oracle=False):
    config = ServiceConfig(
        content=PACK,
        scenarios={ESCAPE.id: ESCAPE, TUTORIAL.id: TUTORIAL},
        data_dir=tmp_path,
        model=model,
        use_oracle=use_oracle,
    )
    return create_app(config)


def poll_until(client, url, predicate, timeout=5.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        response = client.get(url)
        if predicate(response):
            return response
        time.sleep(0.01)
    raise AssertionError(f"timed out polling {url}")


def test_healthz(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        assert client.get("/healthz").json() == {"status": "ok"}


def test_create_session_and_initial_events(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        created = client.post("/sessions", json={"scenario_id": "escape-room", "seed": 1})
        assert created.status_code == 201
        body = created.json()
        session_id = body["session_id"]
        kinds = {e["kind"] for e in body["events"]}
        assert kinds == {"QuestActivated", "HintSpawned"}

        events = client.get(f"/sessions/{session_id}/events", params={"after": 0}).json()
        assert events["events"] == body["events"]
        later = client.get(
            f"/sessions/{session_id}/events", params={"after": body["events"][-1]["seq"]}
        ).json()
        assert later["events"] == []


def test_create_session_errors(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        assert client.post("/sessions", json={"scenario_id": "nope"}).status_code == 404
        assert client.post("/sessions", json={}).status_code == 400
        assert client.post(
            "/sessions", json={"scenario_id": "tutorial", "seed": "x"}
        ).status_code == 400


def test_unknown_session_404(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        assert client.get("/sessions/deadbeef/state").status_code == 404
        assert client.get("/sessions/deadbeef/events").status_code == 404
        assert client.post(
            "/sessions/deadbeef/actions", json={"action": {"type": "TryDoor"}}
        ).status_code == 404


def test_engine_errors_are_409_with_code(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        session_id = client.post(
            "/sessions", json={"scenario_id": "escape-room"}
        ).json()["session_id"]
        response = client.post(
            f"/sessions/{session_id}/actions",
            json={"action": {"type": "CollectHint", "hint_id": "h_postcard"}},
        )
        assert response.status_code == 409
        assert response.json()["error"] == "NotAvailable"
        response = client.post(
            f"/sessions/{session_id}/actions", json={"action": {"type": "Fly"}}
        )
        assert response.status_code == 409
        assert response.json()["error"] == "UnknownAction"
        response = client.post(f"/sessions/{session_id}/actions", json={"nope": 1})
        assert response.status_code == 400


def test_state_view_redacts_unspawned_hints(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        session_id = client.post(
            "/sessions", json={"scenario_id": "escape-room"}
        ).json()["session_id"]
        view = client.get(f"/sessions/{session_id}/state").json()
        assert [h["id"] for h in view["hints"]] == ["h_welcome"]
        assert {q["id"] for q in view["quests"]} == {"q_welcome"}
        assert view["inactive_quests"] == 5
        assert view["locks_unlocked"] == 0
        assert not view["door_open"]


def run_golden_over_http(client) -> tuple[str, list]:
    session_id = client.post(
        "/sessions", json={"scenario_id": "escape-room", "seed": 3}
    ).json()["session_id"]
    for action in GOLDEN_ACTIONS:
        response = client.post(f"/sessions/{session_id}/actions", json={"action": action})
        assert response.status_code == 200, response.text
        if any(e["kind"] == "SimulationStarted" for e in response.json()["events"]):
            poll_until(
                client,
                f"/sessions/{session_id}/events",
                lambda r: any(
                    e["kind"] == "SimulationCompleted" for e in r.json()["events"]
                ),
            )
    events = client.get(f"/sessions/{session_id}/events", params={"after": 0}).json()["events"]
    return session_id, events


def test_golden_playthrough_over_http_matches_engine(tmp_path):
    with TestClient(make_app(tmp_path, use_oracle=True)) as client:
        session_id, events = run_golden_over_http(client)
        engine_result = run_script(GameEngine(ESCAPE, PACK), GOLDEN_ACTIONS, seed=3)
        engine_events = [e.to_dict() for e in engine_result.state.event_log]
        assert events == engine_events

        view = client.get(f"/sessions/{session_id}/state").json()
        assert view["door_open"]
        assert view["locks_unlocked"] == 4
        assert view["last_gadgets"] == engine_result.state.last_gadgets


def test_standalone_simulation_oracle_bit_exact(tmp_path):
    with TestClient(make_app(tmp_path, use_oracle=True)) as client:
        params = SimulationParams(
            location="Graz", orientation="S", month=6, hour=12,
            cooling_enabled=True, shades_on=False,
            setpoint_heating=21.0, setpoint_cooling=25.0,
            window_u=1.1, shgc=0.6, wall_u=0.21,
        )
        accepted = client.post("/simulations", json={"params": params.to_dict()})
        assert accepted.status_code == 202
        job_id = accepted.json()["job_id"]
        done = poll_until(
            client, f"/simulations/{job_id}", lambda r: r.json()["status"] == "Done"
        ).json()
        direct = annual_energy(params, PACK.room, PACK.climate, PACK.rating_bands)
        assert done["result"]["energy"] == direct.to_dict()


def test_standalone_simulation_surrogate_bit_exact(tmp_path, model):
    with TestClient(make_app(tmp_path, model=model)) as client:
        params = SimulationParams(
            location="Seville", orientation="W", month=3, hour=9,
            cooling_enabled=True, shades_on=True,
            setpoint_heating=22.0, setpoint_cooling=26.0,
            window_u=1.4, shgc=0.5, wall_u=0.8,
        )
        job_id = client.post("/simulations", json={"params": params.to_dict()}).json()["job_id"]
        done = poll_until(
            client, f"/simulations/{job_id}", lambda r: r.json()["status"] == "Done"
        ).json()
        assert done["result"]["energy"] == predict(model, params).energy.to_dict()


def test_standalone_simulation_errors(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        assert client.post("/simulations", json={}).status_code == 400
        assert client.post("/simulations", json={"params": {"location": "Graz"}}).status_code == 400
        bad = client.post(
            "/simulations",
            json={"params": {
                "location": "Atlantis", "orientation": "S", "month": 6, "hour": 12,
                "cooling_enabled": False, "shades_on": False, "setpoint_heating": 21,
                "setpoint_cooling": 25, "window_u": 1.1, "shgc": 0.6, "wall_u": 0.2,
            }},
        )
        assert bad.status_code == 409
        assert bad.json()["error"] == "InvalidInput"
        assert client.get("/simulations/ghost").status_code == 404


def test_surrogate_job_round_trip_under_100ms(tmp_path, model):
    with TestClient(make_app(tmp_path, model=model)) as client:
        params = SimulationParams(
            location="Graz", orientation="S", month=6, hour=12,
            cooling_enabled=True, shades_on=False,
            setpoint_heating=21.0, setpoint_cooling=25.0,
            window_u=1.1, shgc=0.6, wall_u=0.21,
        )
        client.post("/simulations", json={"params": params.to_dict()})  # warm up
        start = time.perf_counter()
        job_id = client.post("/simulations", json={"params": params.to_dict()}).json()["job_id"]
        poll_until(client, f"/simulations/{job_id}", lambda r: r.json()["status"] == "Done")
        elapsed = time.perf_counter() - start
        assert elapsed < 0.1, f"job round trip took {elapsed * 1000:.1f} ms"


def test_gets_are_side_effect_free(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        session_id = client.post(
            "/sessions", json={"scenario_id": "tutorial"}
        ).json()["session_id"]
        first = client.get(f"/sessions/{session_id}/state").json()
        for _ in range(3):
            assert client.get(f"/sessions/{session_id}/state").json() == first
            events = client.get(f"/sessions/{session_id}/events").json()
        assert events["events"][-1]["seq"] == first["event_seq"]


def test_save_restart_restore_finishes_playthrough(tmp_path):
    half = len(GOLDEN_ACTIONS) // 2
    with TestClient(make_app(tmp_path, use_oracle=True)) as client:
        session_id = client.post(
            "/sessions", json={"scenario_id": "escape-room", "seed": 9}
        ).json()["session_id"]
        for action in GOLDEN_ACTIONS[:half]:
            response = client.post(f"/sessions/{session_id}/actions", json={"action": action})
            assert response.status_code == 200

    # brand-new app instance over the same data dir: lazy restore from disk
    with TestClient(make_app(tmp_path, use_oracle=True)) as client:
        for action in GOLDEN_ACTIONS[half:]:
            response = client.post(f"/sessions/{session_id}/actions", json={"action": action})
            assert response.status_code == 200, response.text
            if any(e["kind"] == "SimulationStarted" for e in response.json()["events"]):
                poll_until(
                    client,
                    f"/sessions/{session_id}/events",
                    lambda r: any(
                        e["kind"] == "SimulationCompleted" for e in r.json()["events"]
                    ),
                )
        view = client.get(f"/sessions/{session_id}/state").json()
        assert view["door_open"]
        seqs = [
            e["seq"]
            for e in client.get(f"/sessions/{session_id}/events").json()["events"]
        ]
        assert seqs == list(range(1, len(seqs) + 1))


def test_corrupt_session_file_reports_restore_failed(tmp_path):
    app = make_app(tmp_path)
    (tmp_path / "sessions").mkdir(exist_ok=True)
    (tmp_path / "sessions" / "broken.json").write_text("{half a file")
    with TestClient(app, raise_server_exceptions=False) as client:
        response = client.get("/sessions/broken/state")
        assert response.status_code == 500
        assert response.json()["error"] == "RestoreFailed"


def test_session_files_written_atomically(tmp_path):
    with TestClient(make_app(tmp_path)) as client:
        session_id = client.post(
            "/sessions", json={"scenario_id": "tutorial"}
        ).json()["session_id"]
        client.post(
            f"/sessions/{session_id}/actions",
            json={"action": {"type": "CollectHint", "hint_id": "t_paper"}},
        )
        files = list((tmp_path / "sessions").iterdir())
        assert [f.name for f in files] == [f"{session_id}.json"]
        payload = json.loads(files[0].read_text())
        assert payload["state"]["collected_hints"] == ["t_paper"]
        index = json.loads((tmp_path / "index.json").read_text())
        assert session_id in index
