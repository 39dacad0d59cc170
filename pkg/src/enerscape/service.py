"""HTTP layer: sessions, the action/event feed and the start/poll job API.

Each session wraps one engine state behind its own lock, so concurrent
posts to the same session serialize while distinct sessions proceed in
parallel. Simulation jobs run on a small thread pool off the request path
(the surrogate itself answers in well under a millisecond; the job shape
stays asynchronous) and deliver their report back into the session as an
ordinary serialized completion. Session files are written atomically
(write-then-rename), one JSON file per session plus an index.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .climate import SimulationParams, annual_energy, validate_params
from .content import ContentPack
from .errors import EngineError, InvalidInput, RestoreFailed
from .jobs import execute_simulation
from .quest import EventKind, GameEngine, GameState, QuestStatus, Scenario
from .surrogate import SurrogateModel, predict

log = logging.getLogger("enerscape.service")


@dataclass
class ServiceConfig:
    content: ContentPack
    scenarios: dict[str, Scenario]
    data_dir: Path
    model: Optional[SurrogateModel] = None
    use_oracle: bool = False
    job_workers: int = 2

    @property
    def active_model(self) -> Optional[SurrogateModel]:
        return None if self.use_oracle else self.model


@dataclass
class Session:
    id: str
    scenario_id: str
    state: GameState
    created_at: float
    updated_at: float
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    def to_dict(self) -> dict:
        return {
            "session_id": self.id,
            "scenario_id": self.scenario_id,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "state": self.state.to_dict(),
        }


class SessionStore:
    """In-memory sessions with one JSON file per session on disk."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.sessions: dict[str, Session] = {}
        self.engines: dict[str, GameEngine] = {
            sid: GameEngine(scenario, config.content)
            for sid, scenario in config.scenarios.items()
        }
        self._lock = threading.Lock()
        self.sessions_dir = config.data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    def engine_for(self, scenario_id: str) -> Optional[GameEngine]:
        return self.engines.get(scenario_id)

    def create(self, scenario_id: str, seed: int) -> Session:
        engine = self.engines[scenario_id]
        now = time.time()
        session = Session(
            id=uuid.uuid4().hex,
            scenario_id=scenario_id,
            state=engine.new_session(seed),
            created_at=now,
            updated_at=now,
        )
        with self._lock:
            self.sessions[session.id] = session
        self.persist(session)
        return session

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is not None:
            return session
        return self.restore(session_id)

    def restore(self, session_id: str) -> Optional[Session]:
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            session = Session(
                id=data["session_id"],
                scenario_id=data["scenario_id"],
                state=GameState.from_dict(data["state"]),
                created_at=float(data["created_at"]),
                updated_at=float(data["updated_at"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise RestoreFailed(f"session file {path.name} is corrupt: {exc}") from exc
        if session.scenario_id not in self.engines:
            raise RestoreFailed(
                f"session {session_id} references unknown scenario {session.scenario_id!r}"
            )
        with self._lock:
            # a concurrent restore may have won; keep the first one
            session = self.sessions.setdefault(session_id, session)
        return session

    def persist(self, session: Session) -> None:
        session.updated_at = time.time()
        self._atomic_write(
            self.sessions_dir / f"{session.id}.json",
            json.dumps(session.to_dict(), indent=2),
        )
        index_path = self.config.data_dir / "index.json"
        with self._lock:
            index = {
                sid: {
                    "scenario_id": s.scenario_id,
                    "created_at": s.created_at,
                    "updated_at": s.updated_at,
                }
                for sid, s in sorted(self.sessions.items())
            }
        self._atomic_write(index_path, json.dumps(index, indent=2))

    @staticmethod
    def _atomic_write(path: Path, text: str) -> None:
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise


class JobRegistry:
    """Start/poll bookkeeping for simulation jobs."""

    def __init__(self):
        self.jobs: dict[str, dict] = {}
        self._lock = threading.Lock()

    def create(self, session_id: Optional[str], params: dict) -> dict:
        job = {
            "job_id": uuid.uuid4().hex,
            "session_id": session_id,
            "params": params,
            "status": "Pending",
            "result": None,
            "error": None,
            "submitted_at": time.time(),
            "finished_at": None,
        }
        with self._lock:
            self.jobs[job["job_id"]] = job
        return job

    def get(self, job_id: str) -> Optional[dict]:
        with self._lock:
            return self.jobs.get(job_id)

    def update(self, job_id: str, **fields) -> None:
        with self._lock:
            self.jobs[job_id].update(fields)


def session_view(session: Session, engine: GameEngine) -> dict:
    """Client-facing state: hints redacted to spawned-only, inactive quests hidden."""
    state = session.state
    scenario = engine.scenario
    quests = [
        {
            "id": q.id,
            "title": q.title,
            "kind": q.kind.value,
            "status": state.quest_status[q.id],
        }
        for q in scenario.quests
        if state.quest_status[q.id] != QuestStatus.INACTIVE.value
    ]
    hints = []
    for hint_id in state.spawned_hints:
        hint = scenario.hint(hint_id)
        hints.append(
            {
                **hint.to_dict(),
                "collected": hint_id in state.collected_hints,
                "projected": state.projected_hint == hint_id,
            }
        )
    return {
        "session_id": session.id,
        "scenario_id": session.scenario_id,
        "scenario_title": scenario.title,
        "quests": quests,
        "inactive_quests": sum(
            1 for q in scenario.quests
            if state.quest_status[q.id] == QuestStatus.INACTIVE.value
        ),
        "hints": hints,
        "locks_unlocked": state.locks_unlocked,
        "door_open": state.door_open,
        "desk": dict(state.desk),
        "bench": {
            "spawned": [
                {**layer, "placed": i in state.bench_assembly.values()}
                for i, layer in enumerate(state.bench_spawned)
            ],
            "assembly": [[pos, idx] for pos, idx in sorted(state.bench_assembly.items())],
            "created_sample": state.created_sample,
        },
        "assigned_wall": state.assigned_wall,
        "last_gadgets": state.last_gadgets,
        "simulation_pending": state.pending_simulation is not None,
        "day_night_cycles_run": state.day_night_cycles_run,
        "event_seq": state.next_seq - 1,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="enerscape", version="0.1.0")
    # the browser client is served from its own origin (static files)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(config)
    jobs = JobRegistry()
    executor = ThreadPoolExecutor(max_workers=config.job_workers)
    app.state.store = store
    app.state.jobs = jobs
    app.state.executor = executor

    def not_found(what: str) -> JSONResponse:
        return JSONResponse(status_code=404, content={"error": "NotFound", "detail": what})

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        status = 500 if isinstance(exc, RestoreFailed) else 409
        return JSONResponse(
            status_code=status, content={"error": exc.code, "detail": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "MalformedBody", "detail": str(exc.errors())}
        )

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        log.info(
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "ms": round((time.perf_counter() - start) * 1000, 2),
                }
            )
        )
        return response

    def run_session_job(session: Session, engine: GameEngine, job: dict) -> None:
        jobs.update(job["job_id"], status="Running")
        try:
            with session.lock:
                pending = session.state.pending_simulation
                if pending is None:
                    raise InvalidInput("pending job vanished")
            report = execute_simulation(config.content, pending, config.active_model)
            with session.lock:
                engine.complete_simulation(session.state, report)
                store.persist(session)
            jobs.update(
                job["job_id"], status="Done", result=report.to_dict(),
                finished_at=time.time(),
            )
        except Exception as exc:  # job failures must not kill the pool
            log.exception("session job failed")
            jobs.update(
                job["job_id"], status="Failed", error=str(exc), finished_at=time.time()
            )

    def run_standalone_job(job: dict) -> None:
        jobs.update(job["job_id"], status="Running")
        try:
            params = SimulationParams.from_dict(job["params"])
            validate_params(params, config.content.climate)
            model = config.active_model
            if model is not None:
                energy = predict(model, params).energy
            else:
                energy = annual_energy(
                    params, config.content.room, config.content.climate,
                    config.content.rating_bands,
                )
            jobs.update(
                job["job_id"], status="Done", result={"energy": energy.to_dict()},
                finished_at=time.time(),
            )
        except Exception as exc:
            jobs.update(
                job["job_id"], status="Failed", error=str(exc), finished_at=time.time()
            )

    def maybe_start_session_job(session: Session, engine: GameEngine, events) -> Optional[dict]:
        if not any(e.kind is EventKind.SIMULATION_STARTED for e in events):
            return None
        job = jobs.create(session.id, session.state.pending_simulation["params"])
        executor.submit(run_session_job, session, engine, job)
        return job

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        scenario_id = body.get("scenario_id")
        if not isinstance(scenario_id, str):
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedBody", "detail": "scenario_id is required"},
            )
        if store.engine_for(scenario_id) is None:
            return not_found(f"unknown scenario {scenario_id!r}")
        seed = body.get("seed", 0)
        if not isinstance(seed, int):
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedBody", "detail": "seed must be an integer"},
            )
        session = store.create(scenario_id, seed)
        return {
            "session_id": session.id,
            "events": [e.to_dict() for e in session.state.event_log],
        }

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = store.get(session_id)
        if session is None:
            return not_found(f"unknown session {session_id!r}")
        with session.lock:
            return session_view(session, store.engines[session.scenario_id])

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str, after: int = 0):
        session = store.get(session_id)
        if session is None:
            return not_found(f"unknown session {session_id!r}")
        with session.lock:
            events = [e.to_dict() for e in session.state.event_log if e.seq > after]
        return {"events": events}

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, body: dict):
        session = store.get(session_id)
        if session is None:
            return not_found(f"unknown session {session_id!r}")
        action = body.get("action")
        if not isinstance(action, dict):
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedBody", "detail": "body must carry an action object"},
            )
        engine = store.engines[session.scenario_id]
        with session.lock:
            outcome = engine.apply(session.state, action)
            store.persist(session)
            job = maybe_start_session_job(session, engine, outcome.events)
        response: dict[str, Any] = {
            "events": [e.to_dict() for e in outcome.events],
            "data": outcome.data,
        }
        if job is not None:
            response["job_id"] = job["job_id"]
        return response

    @app.post("/simulations", status_code=202)
    def post_simulation(body: dict):
        params = body.get("params")
        if not isinstance(params, dict):
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedBody", "detail": "body must carry params"},
            )
        try:
            parsed = SimulationParams.from_dict(params)
        except (KeyError, TypeError, ValueError) as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedBody", "detail": f"bad params: {exc}"},
            )
        validate_params(parsed, config.content.climate)  # 409 on engine errors
        job = jobs.create(None, parsed.to_dict())
        executor.submit(run_standalone_job, job)
        return {"job_id": job["job_id"]}

    @app.get("/simulations/{job_id}")
    def get_simulation(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return not_found(f"unknown job {job_id!r}")
        return {
            "job_id": job["job_id"],
            "status": job["status"],
            "result": job["result"],
            "error": job["error"],
            "submitted_at": job["submitted_at"],
            "finished_at": job["finished_at"],
        }

    return app
